use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::discretization::benchmark_population;
use crate::error::{Error, Result};
use crate::lexscalar::{Layout, ScalarCost};
use crate::oracle::{CostMode, LinearBenchmark};
use crate::solver::{solve, BetaRule, ReturnRule, SampleRule, SolverConfig, SquareMatrix};
use crate::systems::Integrator;

/// Which solver adaptations are enabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AblationConfig {
    pub cosine_samples: bool,
    pub cosine_beta: bool,
    pub best_sample: bool,
}

impl AblationConfig {
    pub const BASELINE: AblationConfig = AblationConfig { cosine_samples: false, cosine_beta: false, best_sample: false };

    /// Baseline, configurations 1 to 6, then everything enabled.
    pub fn all() -> [AblationConfig; 8] {
        let c = |s, b, r| AblationConfig { cosine_samples: s, cosine_beta: b, best_sample: r };
        [
            c(false, false, false),
            c(false, false, true),
            c(false, true, false),
            c(false, true, true),
            c(true, false, false),
            c(true, false, true),
            c(true, true, false),
            c(true, true, true),
        ]
    }

    pub fn name(&self) -> String {
        match Self::all().iter().position(|c| c == self) {
            Some(0) => "baseline".into(),
            Some(7) => "full".into(),
            Some(i) => format!("config-{i}"),
            None => unreachable!(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationParams {
    pub scenarios: usize,
    pub n_specs: usize,
    /// Violation intervals per specification.
    pub m_per_spec: usize,
    pub iterations: usize,
    pub sigma: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub beta_min: f64,
    pub m_init: usize,
    pub m_final: usize,
    pub seed: u64,
}

impl Default for AblationParams {
    fn default() -> Self {
        Self {
            scenarios: 500,
            n_specs: 8,
            m_per_spec: 5,
            iterations: 20,
            sigma: 0.5,
            lambda: 1.0,
            gamma: 0.6,
            beta_min: 1e-6,
            m_init: 400,
            m_final: 250,
            seed: 0,
        }
    }
}

impl AblationParams {
    pub fn solver_config(&self, cfg: AblationConfig, seed: u64) -> Result<SolverConfig<f64>> {
        let sys = Integrator::<f64>::default();
        let mut c = SolverConfig::for_system(&sys, SquareMatrix::from_row_major(1, vec![self.sigma])?);
        c.iterations = self.iterations;
        c.lambda = self.lambda;
        c.beta_rule = if cfg.cosine_beta { BetaRule::Cosine { beta_min: self.beta_min } } else { BetaRule::Exponential { gamma: self.gamma } };
        c.sample_rule = if cfg.cosine_samples {
            SampleRule::Cosine { m_init: self.m_init, m_final: self.m_final }
        } else {
            SampleRule::Constant { m: self.m_init }
        };
        c.return_rule = if cfg.best_sample { ReturnRule::BestSample } else { ReturnRule::FinalMppi };
        c.seed = seed;
        Ok(c)
    }
}

/// Per-scenario outcome: exact optimum and each configuration's returned cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationScenario {
    pub index: usize,
    pub thresholds: Vec<f64>,
    pub optimum: ScalarCost,
    /// In the order of [`AblationConfig::all`].
    pub costs: Vec<ScalarCost>,
}

/// One row of the summary table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationRow {
    pub method: String,
    pub cosine_samples: Option<bool>,
    pub cosine_beta: Option<bool>,
    pub best_sample: Option<bool>,
    pub p_lower: f64,
    pub p_equal: f64,
    pub p_higher: f64,
    /// Mean optimality gap in percent over scenarios with a defined gap.
    pub mean_gap: f64,
    /// Mean of `gap - baseline gap` over scenarios where both are defined.
    pub mean_gap_delta: f64,
    /// Fraction of scenarios where the exact optimum was returned, in percent.
    pub p_optimal: f64,
    /// Scenarios excluded because the optimum is 0 but the returned cost is not.
    pub undefined_gaps: usize,
    pub samples_per_solve: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationReport {
    pub rows: Vec<AblationRow>,
    pub scenarios: Vec<AblationScenario>,
}

/// `(s - s*) / s* * 100`; `Some(0)` when both are zero, `None` when only `s*` is zero.
pub fn optimality_gap(cost: &ScalarCost, optimum: &ScalarCost) -> Option<f64> {
    if optimum.is_zero() {
        return cost.is_zero().then_some(0.0);
    }
    let diff = if cost >= optimum { cost.offset_f64(optimum) } else { -optimum.offset_f64(cost) };
    Some(diff / optimum.to_f64() * 100.0)
}

fn run_scenario(params: &AblationParams, index: usize, bench: &LinearBenchmark, configs: &[AblationConfig]) -> Result<AblationScenario> {
    let m = vec![params.m_per_spec; params.n_specs];
    let schemes = bench.schemes(&m)?;
    let layout = Layout::new(&vec![params.m_per_spec as u64; params.n_specs])?;
    let opt = bench.exact_lex_optimum(CostMode::Discretized(&schemes))?;
    let optimum = layout.pack(opt.discrete.as_deref().unwrap_or_default())?;
    let cost = bench.cost_function(&m)?;
    let sys = Integrator::<f64>::default();
    let u0 = vec![0.0; params.n_specs + 1];
    let seed = params.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64);
    let costs = configs
        .iter()
        .map(|cfg| {
            let sc = params.solver_config(*cfg, seed)?;
            let r = solve(&sys, &cost, &[bench.x0], &u0, &sc)?;
            Ok(r.solution().cost.clone())
        })
        .collect::<Result<_>>()?;
    Ok(AblationScenario { index, thresholds: bench.thresholds.clone(), optimum, costs })
}

/// Runs every configuration on the random benchmark population and summarizes it
/// against the baseline and the exact optimum.
pub fn solver_ablation(params: &AblationParams) -> Result<AblationReport> {
    if params.scenarios == 0 {
        return Err(Error::Config("the ablation needs at least one scenario".into()));
    }
    let configs = AblationConfig::all();
    let benches = benchmark_population(params.seed, params.scenarios, params.n_specs)?;
    let scenarios: Vec<AblationScenario> = benches
        .par_iter()
        .enumerate()
        .map(|(i, b)| run_scenario(params, i, b, &configs))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(configs.len() + 1);
    for (ci, cfg) in configs.iter().enumerate() {
        let samples = params.solver_config(*cfg, 0)?.sample_rule.total(params.iterations);
        rows.push(summarize(&scenarios, |s| &s.costs[ci], cfg.name(), Some(*cfg), samples));
    }
    rows.push(summarize(&scenarios, |s| &s.optimum, "optimum".into(), None, 0));
    Ok(AblationReport { rows, scenarios })
}

fn summarize(
    scenarios: &[AblationScenario],
    cost_of: impl Fn(&AblationScenario) -> &ScalarCost,
    method: String,
    cfg: Option<AblationConfig>,
    samples_per_solve: usize,
) -> AblationRow {
    let n = scenarios.len() as f64;
    let (mut lower, mut equal, mut higher, mut optimal, mut undefined) = (0usize, 0usize, 0usize, 0usize, 0usize);
    let (mut gaps, mut deltas) = (Vec::new(), Vec::new());
    for s in scenarios {
        let c = cost_of(s);
        let base = &s.costs[0];
        match c.cmp(base) {
            Ordering::Less => lower += 1,
            Ordering::Equal => equal += 1,
            Ordering::Greater => higher += 1,
        }
        if c == &s.optimum {
            optimal += 1;
        }
        match optimality_gap(c, &s.optimum) {
            Some(g) => {
                gaps.push(g);
                if let Some(gb) = optimality_gap(base, &s.optimum) {
                    deltas.push(g - gb);
                }
            }
            None => undefined += 1,
        }
    }
    let mean = |v: &[f64]| if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
    AblationRow {
        method,
        cosine_samples: cfg.map(|c| c.cosine_samples),
        cosine_beta: cfg.map(|c| c.cosine_beta),
        best_sample: cfg.map(|c| c.best_sample),
        p_lower: lower as f64 / n * 100.0,
        p_equal: equal as f64 / n * 100.0,
        p_higher: higher as f64 / n * 100.0,
        mean_gap: mean(&gaps),
        mean_gap_delta: mean(&deltas),
        p_optimal: optimal as f64 / n * 100.0,
        undefined_gaps: undefined,
        samples_per_solve,
    }
}
