use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexscalar::{CostFunction, ScalarCost};
use crate::scalar::Real;
use crate::solver::config::{ReturnRule, SolverConfig};
use crate::solver::linalg::SquareMatrix;
use crate::stl::Trace;
use crate::systems::{inputs_within_bounds, rollout, System};

/// An evaluated input trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate<F> {
    /// Flat time-major inputs `u_0..=u_K`.
    pub inputs: Vec<F>,
    pub trace: Trace<F>,
    pub cost: ScalarCost,
}

/// Diagnostics of one solver iteration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub beta: f64,
    pub samples: usize,
    /// Minimum sampled cost of this iteration; `None` if every sample was invalid.
    pub min_cost: Option<ScalarCost>,
    pub best_so_far: Option<ScalarCost>,
    /// Shannon entropy of the sample weights (nats).
    pub weight_entropy: f64,
    /// Spectral norm of the effective input weight `λ_j Σ_j^{-1}`.
    pub input_weight_norm: f64,
    pub invalid: usize,
    pub wall_time_s: f64,
}

/// Output of [`solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult<F> {
    /// Lowest-cost sample over all iterations (first one wins ties).
    pub best: Candidate<F>,
    /// Rollout of the final updated input trajectory, if it was valid.
    pub mppi: Option<Candidate<F>>,
    pub return_rule: ReturnRule,
    pub iterations: Vec<IterationRecord>,
    pub invalid_samples: usize,
    pub total_samples: usize,
}

impl<F> SolveResult<F> {
    /// The candidate selected by the return rule.
    pub fn solution(&self) -> &Candidate<F> {
        match (self.return_rule, &self.mppi) {
            (ReturnRule::FinalMppi, Some(c)) => c,
            _ => &self.best,
        }
    }
}

/// Per-iteration internals handed to an observer, mainly for testing.
pub struct IterationDetail<'a, F> {
    pub iteration: usize,
    pub beta: F,
    pub lambda_j: F,
    pub sigma_j_inv: &'a SquareMatrix<F>,
    /// Mean input trajectory before the update.
    pub u_hat: &'a [F],
    /// Clipped sample inputs, one flat trajectory per sample.
    pub sample_inputs: Vec<&'a [F]>,
    /// `None` for invalid samples.
    pub costs: Vec<Option<&'a ScalarCost>>,
    /// `ℓ^m`; `+inf` for invalid samples.
    pub ell: &'a [f64],
    pub weights: &'a [f64],
    /// Mean input trajectory after the update.
    pub u_next: &'a [F],
}

struct Sample<F> {
    eps: Vec<F>,
    inputs: Vec<F>,
    rollout: Option<(Trace<F>, ScalarCost)>,
    correction: F,
}

/// Deterministic MPPI over the packed lexicographic cost.
pub fn solve<F, S, C>(system: &S, cost: &C, x0: &[F], u_init: &[F], config: &SolverConfig<F>) -> Result<SolveResult<F>>
where
    F: Real,
    S: System<F> + ?Sized,
    C: CostFunction<F> + ?Sized,
{
    solve_observed(system, cost, x0, u_init, config, |_| {})
}

/// [`solve`] with a callback invoked after every iteration's update.
pub fn solve_observed<F, S, C>(
    system: &S,
    cost: &C,
    x0: &[F],
    u_init: &[F],
    config: &SolverConfig<F>,
    mut observer: impl FnMut(&IterationDetail<'_, F>),
) -> Result<SolveResult<F>>
where
    F: Real,
    S: System<F> + ?Sized,
    C: CostFunction<F> + ?Sized,
{
    config.validate()?;
    let n_u = config.n_u();
    if n_u != system.n_u() {
        return Err(Error::Config(format!("covariance is {n_u}x{n_u} but the system has {} inputs", system.n_u())));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::ContractViolation("initial state is not finite".into()));
    }
    if u_init.len() < 2 * n_u || u_init.len() % n_u != 0 {
        return Err(Error::ContractViolation(format!("initial input trajectory needs K+1 >= 2 rows of {n_u} inputs")));
    }
    if !inputs_within_bounds(u_init, &config.u_lo, &config.u_hi) {
        return Err(Error::ContractViolation("initial input trajectory violates the input bounds".into()));
    }

    let steps = u_init.len() / n_u;
    let lambda = config.lambda;
    let sigma_chol = config.sigma.cholesky()?;
    let mut u_hat = u_init.to_vec();
    let mut best: Option<Candidate<F>> = None;
    let mut records = Vec::with_capacity(config.iterations);
    let (mut invalid_total, mut sample_total) = (0usize, 0usize);

    for j in 1..=config.iterations {
        let started = Instant::now();
        let beta_f64 = config.beta_rule.beta(j, config.iterations);
        let beta = F::lit(beta_f64);
        let lambda_j = beta * beta * lambda;
        let sigma_j = config.sigma.scaled(beta);
        let sigma_j_inv = sigma_j.spd_inverse()?;
        // L_j = sqrt(β) L, the Cholesky factor of βΣ.
        let chol_j = sigma_chol.scaled(beta.sqrt());
        let m_count = config.sample_rule.samples(j, config.iterations);

        // Σ_j^{-1} û_k, shared by every sample's correction term.
        let mut weighted_u = vec![F::zero(); u_hat.len()];
        for k in 0..steps {
            sigma_j_inv.mul_vec(&u_hat[k * n_u..(k + 1) * n_u], &mut weighted_u[k * n_u..(k + 1) * n_u]);
        }

        let samples: Vec<Sample<F>> = (0..m_count)
            .into_par_iter()
            .map(|m| {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(((j as u64) << 32) | m as u64);
                let mut z = vec![F::zero(); n_u];
                let mut e = vec![F::zero(); n_u];
                let mut eps = vec![F::zero(); u_hat.len()];
                let mut inputs = vec![F::zero(); u_hat.len()];
                for k in 0..steps {
                    for zi in z.iter_mut() {
                        let draw: f64 = StandardNormal.sample(&mut rng);
                        *zi = F::lit(draw);
                    }
                    chol_j.mul_vec(&z, &mut e);
                    for i in 0..n_u {
                        let idx = k * n_u + i;
                        let clipped = config.u_hi[i].min(config.u_lo[i].max(u_hat[idx] + e[i]));
                        inputs[idx] = clipped;
                        eps[idx] = clipped - u_hat[idx];
                    }
                }
                let correction = eps.iter().zip(&weighted_u).fold(F::zero(), |acc, (a, b)| acc + *a * *b) * lambda_j;
                let rollout = rollout(system, x0, &inputs)
                    .and_then(|trace| cost.cost(&trace).map(|c| (trace, c)))
                    .ok();
                Sample { eps, inputs, rollout, correction }
            })
            .collect();

        let invalid = samples.iter().filter(|s| s.rollout.is_none()).count();
        invalid_total += invalid;
        sample_total += m_count;

        let floor = samples.iter().filter_map(|s| s.rollout.as_ref().map(|r| &r.1)).min().cloned();
        let mut ell = vec![f64::INFINITY; m_count];
        let mut weights = vec![0.0; m_count];
        if let Some(floor) = &floor {
            for (l, s) in ell.iter_mut().zip(&samples) {
                if let Some((_, c)) = &s.rollout {
                    *l = c.offset_f64(floor) + s.correction.as_f64();
                }
            }
            let ell_min = ell.iter().cloned().fold(f64::INFINITY, f64::min);
            let lj = lambda_j.as_f64();
            for (w, l) in weights.iter_mut().zip(&ell) {
                *w = if l.is_finite() { (-(l - ell_min) / lj).exp() } else { 0.0 };
            }
            let theta: f64 = weights.iter().sum();
            for w in weights.iter_mut() {
                *w /= theta;
            }
        }

        for s in &samples {
            if let Some((trace, c)) = &s.rollout {
                if best.as_ref().is_none_or(|b| *c < b.cost) {
                    best = Some(Candidate { inputs: s.inputs.clone(), trace: trace.clone(), cost: c.clone() });
                }
            }
        }

        let u_prev = u_hat.clone();
        if floor.is_some() {
            for (idx, u) in u_hat.iter_mut().enumerate() {
                let delta = samples
                    .iter()
                    .zip(&weights)
                    .filter(|(_, w)| **w > 0.0)
                    .fold(F::zero(), |acc, (s, w)| acc + F::lit(*w) * s.eps[idx]);
                *u = *u + delta;
            }
        }

        observer(&IterationDetail {
            iteration: j,
            beta,
            lambda_j,
            sigma_j_inv: &sigma_j_inv,
            u_hat: &u_prev,
            sample_inputs: samples.iter().map(|s| s.inputs.as_slice()).collect(),
            costs: samples.iter().map(|s| s.rollout.as_ref().map(|r| &r.1)).collect(),
            ell: &ell,
            weights: &weights,
            u_next: &u_hat,
        });

        let entropy = -weights.iter().filter(|w| **w > 0.0).map(|w| w * w.ln()).sum::<f64>();
        records.push(IterationRecord {
            iteration: j,
            beta: beta_f64,
            samples: m_count,
            min_cost: floor,
            best_so_far: best.as_ref().map(|b| b.cost.clone()),
            weight_entropy: entropy,
            input_weight_norm: sigma_j_inv.scaled(lambda_j).spectral_norm().as_f64(),
            invalid,
            wall_time_s: started.elapsed().as_secs_f64(),
        });
    }

    let best = best.ok_or(Error::NoValidSample)?;
    let mppi = rollout(system, x0, &u_hat)
        .and_then(|trace| cost.cost(&trace).map(|c| (trace, c)))
        .ok()
        .map(|(trace, cost)| Candidate { inputs: u_hat.clone(), trace, cost });
    if config.return_rule == ReturnRule::FinalMppi && mppi.is_none() {
        return Err(Error::Dynamics("rollout of the final input trajectory failed".into()));
    }
    Ok(SolveResult {
        best,
        mppi,
        return_rule: config.return_rule,
        iterations: records,
        invalid_samples: invalid_total,
        total_samples: sample_total,
    })
}
