use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::compositions::{sample_distinct_compositions, CompositionSample, Strategy};
use crate::error::{Error, Result};
use crate::oracle::{violation_error, CostMode, LexOptimum, LinearBenchmark};

/// Thresholds `r_k ~ U[-3, 3]` of scenario `index`, deterministic per seed.
pub fn random_thresholds(seed: u64, index: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..n).map(|_| rng.random_range(-3.0..=3.0)).collect()
}

/// Random benchmark population shared by the discretization study and the ablation.
pub fn benchmark_population(seed: u64, count: usize, n_specs: usize) -> Result<Vec<LinearBenchmark>> {
    (0..count).map(|i| LinearBenchmark::new(random_thresholds(seed, i as u64, n_specs))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationParams {
    pub scenarios: usize,
    pub m_totals: Vec<usize>,
    pub compositions: usize,
    pub n_specs: usize,
    pub seed: u64,
}

impl Default for DiscretizationParams {
    fn default() -> Self {
        Self { scenarios: 200, m_totals: (8..=160).step_by(8).collect(), compositions: 100, n_specs: 8, seed: 0 }
    }
}

/// One line of the study: mean and standard deviation of `ε_viol` over scenarios.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscretizationRow {
    pub m_total: usize,
    /// `best`, `even`, `linear-increase` or `linear-decrease`.
    pub strategy: String,
    pub mean: f64,
    pub std: f64,
    /// Interval counts, `-`-separated.
    pub composition: String,
}

/// Violation error of one benchmark under one composition.
pub fn composition_error(bench: &LinearBenchmark, continuous: &LexOptimum, parts: &[usize]) -> Result<f64> {
    let schemes = bench.schemes(parts)?;
    let disc = bench.exact_lex_optimum(CostMode::Discretized(&schemes))?;
    Ok(violation_error(continuous, &disc))
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn joined(c: &CompositionSample) -> String {
    c.parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("-")
}

/// Sweeps `m_total`; per step, the best sampled composition (lowest mean error over
/// the scenarios) and the three fixed strategies.
pub fn discretization_study(params: &DiscretizationParams) -> Result<Vec<DiscretizationRow>> {
    if params.scenarios == 0 || params.m_totals.is_empty() || params.compositions == 0 {
        return Err(Error::Config("the discretization study needs scenarios, compositions and at least one m_total".into()));
    }
    let n = params.n_specs;
    let benches = benchmark_population(params.seed, params.scenarios, n)?;
    let continuous: Vec<LexOptimum> = benches
        .par_iter()
        .map(|b| b.exact_lex_optimum(CostMode::Continuous))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for &m_total in &params.m_totals {
        let comps = sample_distinct_compositions(m_total, n, params.compositions, params.seed ^ (m_total as u64).rotate_left(32))?;
        let errors_of = |c: &CompositionSample| -> Result<Vec<f64>> {
            benches
                .par_iter()
                .zip(continuous.par_iter())
                .map(|(b, o)| composition_error(b, o, &c.parts))
                .collect()
        };
        let mut named = Vec::with_capacity(Strategy::ALL.len());
        for s in Strategy::ALL {
            let c = s.composition(m_total, n)?;
            let (mean, std) = mean_std(&errors_of(&c)?);
            named.push(DiscretizationRow { m_total, strategy: s.name().into(), mean, std, composition: joined(&c) });
        }
        // The best allocation is taken over every evaluated one, named strategies included.
        let mut best = named.iter().min_by(|a, b| a.mean.total_cmp(&b.mean)).cloned().expect("three strategies");
        for c in &comps {
            let (mean, std) = mean_std(&errors_of(c)?);
            if mean < best.mean {
                best = DiscretizationRow { m_total, strategy: String::new(), mean, std, composition: joined(c) };
            }
        }
        best.strategy = "best".into();
        rows.push(best);
        rows.extend(named);
    }
    Ok(rows)
}
