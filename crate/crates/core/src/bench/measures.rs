use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexscalar::{DiscretizationScheme, Spec, SpecSet};
use crate::robustness::{CompiledFormula, Measure, PredicateCache};
use crate::solver::solve;
use crate::stl::{parse_formula, Trace};
use crate::systems::running_example;
use crate::systems::{rollout, Scenario, System};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MeasureBenchParams {
    pub measures: Vec<Measure>,
    pub formula: String,
    /// Random trajectories per timing batch.
    pub trajectories: usize,
    /// Timed repetitions after the warmup.
    pub repeats: usize,
    pub warmup: usize,
    /// Timed solves per measure.
    pub solves: usize,
    pub seed: u64,
}

impl Default for MeasureBenchParams {
    fn default() -> Self {
        Self {
            measures: Measure::ALL.to_vec(),
            formula: "G(in_lane)".into(),
            trajectories: 400,
            repeats: 10,
            warmup: 2,
            solves: 5,
            seed: 0,
        }
    }
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    pub fn of(xs: &[f64]) -> Stat {
        if xs.is_empty() {
            return Stat { mean: f64::NAN, std: f64::NAN };
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let std = if xs.len() < 2 { 0.0 } else { (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() };
        Stat { mean, std }
    }
}

/// Timings in milliseconds; call counts per trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureRow {
    pub measure: Measure,
    /// Full solve.
    pub t_sol_ms: Stat,
    /// One robustness evaluation.
    pub t_rob_ms: Stat,
    pub calls: Stat,
    pub calls_uncached: Stat,
}

/// Random input rollouts of the overtaking scenario; inputs uniform within the bounds.
pub fn random_trajectories(scenario: &Scenario, count: usize, seed: u64) -> Result<Vec<Trace<f64>>> {
    let sys = scenario.system();
    let (lo, hi) = (sys.u_lo().to_vec(), sys.u_hi().to_vec());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps = scenario.horizon() + 1;
    (0..count)
        .map(|_| {
            let u: Vec<f64> = (0..steps).flat_map(|_| (0..lo.len()).map(|i| rng.random_range(lo[i]..=hi[i])).collect::<Vec<_>>()).collect();
            rollout(sys, scenario.initial_state(), &u)
        })
        .collect()
}

/// Solve time, robustness time and predicate calls per measure on the overtaking scenario.
pub fn measure_benchmark(params: &MeasureBenchParams) -> Result<Vec<MeasureRow>> {
    if params.measures.is_empty() || params.trajectories == 0 || params.repeats == 0 {
        return Err(Error::Config("measure benchmark needs measures, trajectories and repeats".into()));
    }
    let scenario = running_example::overtaking()?;
    let registry = scenario.registry_at(0.0)?;
    let formula = parse_formula(&params.formula, &registry)?;
    let compiled = CompiledFormula::new(&formula);
    let traces = random_trajectories(&scenario, params.trajectories, params.seed)?;
    let base = scenario.solver_config()?;
    let mut rows = Vec::with_capacity(params.measures.len());
    for &measure in &params.measures {
        let config = measure.config();
        let mut calls = Vec::with_capacity(traces.len());
        let mut calls_uncached = Vec::with_capacity(traces.len());
        for t in &traces {
            calls.push(compiled.robustness_with_stats(&config, t, 0, PredicateCache::On)?.1.predicate_calls as f64);
            calls_uncached.push(compiled.robustness_with_stats(&config, t, 0, PredicateCache::Off)?.1.predicate_calls as f64);
        }
        let mut t_rob = Vec::with_capacity(params.repeats);
        for rep in 0..params.warmup + params.repeats {
            let started = Instant::now();
            for t in &traces {
                std::hint::black_box(compiled.robustness(&config, t, 0)?);
            }
            if rep >= params.warmup {
                t_rob.push(started.elapsed().as_secs_f64() * 1e3 / traces.len() as f64);
            }
        }
        let specs = SpecSet::new(vec![Spec::new("lane", formula.clone(), config, DiscretizationScheme::uniform(30.0, 30)?)])?;
        let mut t_sol = Vec::with_capacity(params.solves);
        for i in 0..params.warmup.min(1) + params.solves {
            let mut cfg = base.clone();
            cfg.seed = params.seed.wrapping_add(i as u64);
            let started = Instant::now();
            std::hint::black_box(solve(scenario.system(), &specs, scenario.initial_state(), &scenario.initial_inputs(), &cfg)?);
            if i >= params.warmup.min(1) {
                t_sol.push(started.elapsed().as_secs_f64() * 1e3);
            }
        }
        rows.push(MeasureRow {
            measure,
            t_sol_ms: Stat::of(&t_sol),
            t_rob_ms: Stat::of(&t_rob),
            calls: Stat::of(&calls),
            calls_uncached: Stat::of(&calls_uncached),
        });
    }
    Ok(rows)
}
