use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solver::linalg::SquareMatrix;
use crate::solver::schedule::{beta_cosine, beta_exponential, sample_count_cosine};
use crate::systems::System;

/// Decay rule for `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BetaRule {
    Cosine { beta_min: f64 },
    Exponential { gamma: f64 },
}

impl BetaRule {
    pub fn beta(&self, j: usize, iterations: usize) -> f64 {
        match *self {
            BetaRule::Cosine { beta_min } => beta_cosine(j, iterations, beta_min),
            BetaRule::Exponential { gamma } => beta_exponential(j, gamma),
        }
    }
}

/// Number of samples per iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SampleRule {
    Constant { m: usize },
    Cosine { m_init: usize, m_final: usize },
}

impl SampleRule {
    pub fn samples(&self, j: usize, iterations: usize) -> usize {
        match *self {
            SampleRule::Constant { m } => m,
            SampleRule::Cosine { m_init, m_final } => sample_count_cosine(j, iterations, m_init, m_final),
        }
    }

    pub fn total(&self, iterations: usize) -> usize {
        (1..=iterations).map(|j| self.samples(j, iterations)).sum()
    }
}

/// Which trajectory the solver returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReturnRule {
    /// Lowest-cost sample over all iterations.
    BestSample,
    /// Rollout of the input trajectory after the last update.
    FinalMppi,
}

/// Parameters of the deterministic MPPI solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<F> {
    pub iterations: usize,
    pub sigma: SquareMatrix<F>,
    pub lambda: F,
    pub beta_rule: BetaRule,
    pub sample_rule: SampleRule,
    pub return_rule: ReturnRule,
    pub u_lo: Vec<F>,
    pub u_hi: Vec<F>,
    pub seed: u64,
}

impl<F: Real> SolverConfig<F> {
    /// Cosine decays, best-sample return, and the system's input bounds.
    pub fn for_system<S: System<F> + ?Sized>(sys: &S, sigma: SquareMatrix<F>) -> Self {
        Self {
            iterations: 20,
            sigma,
            lambda: F::one(),
            beta_rule: BetaRule::Cosine { beta_min: 1e-6 },
            sample_rule: SampleRule::Cosine { m_init: 400, m_final: 250 },
            return_rule: ReturnRule::BestSample,
            u_lo: sys.u_lo().to_vec(),
            u_hi: sys.u_hi().to_vec(),
            seed: 0,
        }
    }

    pub fn n_u(&self) -> usize {
        self.sigma.n()
    }

    /// Checks every invariant. `J = 1` is accepted and runs a single iteration with `β = 1`.
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("at least one iteration is required".into()));
        }
        self.sigma.cholesky()?;
        if !(self.lambda.is_finite() && self.lambda > F::zero()) {
            return Err(Error::Config(format!("temperature must be positive, got {}", self.lambda)));
        }
        match self.beta_rule {
            BetaRule::Cosine { beta_min } if !(beta_min > 0.0 && beta_min < 1.0) => {
                return Err(Error::Config(format!("beta_min must lie in (0, 1), got {beta_min}")))
            }
            BetaRule::Exponential { gamma } if !(gamma > 0.0 && gamma < 1.0) => {
                return Err(Error::Config(format!("gamma must lie in (0, 1), got {gamma}")))
            }
            _ => {}
        }
        match self.sample_rule {
            SampleRule::Constant { m } if m == 0 => return Err(Error::Config("sample count must be positive".into())),
            SampleRule::Cosine { m_init, m_final } if !(m_init >= m_final && m_final >= 1) => {
                return Err(Error::Config(format!("need m_init >= m_final >= 1, got {m_init} and {m_final}")))
            }
            _ => {}
        }
        let n = self.n_u();
        if self.u_lo.len() != n || self.u_hi.len() != n {
            return Err(Error::Config(format!("input bounds must have {n} entries")));
        }
        for (l, h) in self.u_lo.iter().zip(&self.u_hi) {
            if !(l.is_finite() && h.is_finite() && l <= h) {
                return Err(Error::Config(format!("invalid input bound [{l}, {h}]")));
            }
        }
        Ok(())
    }
}
