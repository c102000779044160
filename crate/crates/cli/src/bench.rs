use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use lexmv_core::bench::{
    discretization_study, fan_comparison, measure_benchmark, solver_ablation, AblationParams, DiscretizationParams, FanInstant,
    MeasureBenchParams,
};
use lexmv_core::robustness::Measure;

use crate::failure::{CmdResult, Failure};
use crate::output::{parse_list, parse_range, Outputs};
use crate::{Globals, Report};

#[derive(Debug, Subcommand)]
pub enum Study {
    /// Violation error of interval allocations over a sweep of total budgets.
    Discretization(DiscretizationArgs),
    /// Solver configurations against the exact optimum on the integrator benchmark.
    Ablation(AblationArgs),
    /// Timing and predicate calls per robustness measure.
    Measures(MeasuresArgs),
    /// Robustness of the overtaking trajectory fans under several measures.
    Comparison(ComparisonArgs),
}

impl Study {
    pub fn name(&self) -> &'static str {
        match self {
            Study::Discretization(_) => "discretization",
            Study::Ablation(_) => "ablation",
            Study::Measures(_) => "measures",
            Study::Comparison(_) => "comparison",
        }
    }
}

#[derive(Debug, Args)]
pub struct DiscretizationArgs {
    /// Budget sweep `start:stop:step`.
    #[arg(long, default_value = "8:160:8")]
    pub m_total: String,
    #[arg(long, default_value_t = 200)]
    pub scenarios: usize,
    #[arg(long, default_value_t = 100)]
    pub compositions: usize,
    #[arg(long, default_value_t = 8)]
    pub n_specs: usize,
}

#[derive(Debug, Args)]
pub struct AblationArgs {
    #[arg(long, default_value_t = 500)]
    pub scenarios: usize,
    #[arg(long, default_value_t = 8)]
    pub n_specs: usize,
    #[arg(long, default_value_t = 5)]
    pub m_per_spec: usize,
    #[arg(long, default_value_t = 20)]
    pub iterations: usize,
}

#[derive(Debug, Args)]
pub struct MeasuresArgs {
    /// Comma-separated measure names (default: all).
    #[arg(long)]
    pub measures: Option<String>,
    #[arg(long, default_value = "G(in_lane)")]
    pub formula: String,
    #[arg(long, default_value_t = 400)]
    pub trajectories: usize,
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    #[arg(long, default_value_t = 2)]
    pub warmup: usize,
    #[arg(long, default_value_t = 5)]
    pub solves: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InstantArg {
    T1,
    T2,
    Both,
}

#[derive(Debug, Args)]
pub struct ComparisonArgs {
    #[arg(long, value_enum, default_value_t = InstantArg::Both)]
    pub instant: InstantArg,
    /// Comma-separated measure names (default: all).
    #[arg(long)]
    pub measures: Option<String>,
}

fn measures(list: &Option<String>) -> CmdResult<Vec<Measure>> {
    match list {
        Some(s) => parse_list("measures", s),
        None => Ok(Measure::ALL.to_vec()),
    }
}

#[derive(Serialize)]
struct MeasureLine {
    measure: Measure,
    t_sol_ms_mean: f64,
    t_sol_ms_std: f64,
    t_rob_ms_mean: f64,
    t_rob_ms_std: f64,
    calls_mean: f64,
    calls_std: f64,
    calls_uncached_mean: f64,
    calls_uncached_std: f64,
}

#[derive(Serialize)]
struct ComparisonLine {
    instant: FanInstant,
    measure: Measure,
    sample: usize,
    raw: f64,
    normalized: f64,
    normalizable: bool,
}

pub fn run(study: &Study, g: &Globals, out: &mut Outputs) -> CmdResult<Report> {
    let seed = g.seed.unwrap_or(0);
    let summary = match study {
        Study::Discretization(a) => {
            let params = DiscretizationParams {
                scenarios: a.scenarios,
                m_totals: parse_range("m-total", &a.m_total)?,
                compositions: a.compositions,
                n_specs: a.n_specs,
                seed,
            };
            if params.m_totals[0] < params.n_specs {
                return Err(Failure::input(format!("--m-total must start at n_specs = {} or above", params.n_specs)));
            }
            let rows = discretization_study(&params)?;
            out.table("discretization", g.format, &rows)?;
            for r in &rows {
                println!("{:>4} {:<16} {:.4} ± {:.4}  {}", r.m_total, r.strategy, r.mean, r.std, r.composition);
            }
            json!({ "params": params, "rows": rows.len() })
        }
        Study::Ablation(a) => {
            let params = AblationParams { scenarios: a.scenarios, n_specs: a.n_specs, m_per_spec: a.m_per_spec, iterations: a.iterations, seed, ..AblationParams::default() };
            let report = solver_ablation(&params)?;
            out.table("ablation", g.format, &report.rows)?;
            out.json("ablation_scenarios.json", &report.scenarios)?;
            println!("{:<10} {:>8} {:>8} {:>8} {:>10} {:>9}", "method", "lower%", "equal%", "higher%", "gap%", "optimal%");
            for r in &report.rows {
                println!("{:<10} {:>8.2} {:>8.2} {:>8.2} {:>10.3} {:>9.2}", r.method, r.p_lower, r.p_equal, r.p_higher, r.mean_gap, r.p_optimal);
            }
            json!({ "params": params })
        }
        Study::Measures(a) => {
            let params = MeasureBenchParams {
                measures: measures(&a.measures)?,
                formula: a.formula.clone(),
                trajectories: a.trajectories,
                repeats: a.repeats,
                warmup: a.warmup,
                solves: a.solves,
                seed,
            };
            let rows = measure_benchmark(&params)?;
            let lines: Vec<MeasureLine> = rows
                .iter()
                .map(|r| MeasureLine {
                    measure: r.measure,
                    t_sol_ms_mean: r.t_sol_ms.mean,
                    t_sol_ms_std: r.t_sol_ms.std,
                    t_rob_ms_mean: r.t_rob_ms.mean,
                    t_rob_ms_std: r.t_rob_ms.std,
                    calls_mean: r.calls.mean,
                    calls_std: r.calls.std,
                    calls_uncached_mean: r.calls_uncached.mean,
                    calls_uncached_std: r.calls_uncached.std,
                })
                .collect();
            out.table("measures", g.format, &lines)?;
            for l in &lines {
                println!(
                    "{:<16} t_sol {:>9.2} ms  t_rob {:>8.4} ms  calls {:>5.1} (uncached {:>6.1})",
                    l.measure.to_string(),
                    l.t_sol_ms_mean,
                    l.t_rob_ms_mean,
                    l.calls_mean,
                    l.calls_uncached_mean
                );
            }
            json!({ "params": params })
        }
        Study::Comparison(a) => {
            let ms = measures(&a.measures)?;
            let instants = match a.instant {
                InstantArg::T1 => vec![FanInstant::T1],
                InstantArg::T2 => vec![FanInstant::T2],
                InstantArg::Both => vec![FanInstant::T1, FanInstant::T2],
            };
            let mut lines = Vec::new();
            for &instant in &instants {
                let table = fan_comparison(instant, &ms)?;
                for (i, &measure) in table.measures.iter().enumerate() {
                    for (sample, raw) in table.raw[i].iter().enumerate() {
                        lines.push(ComparisonLine {
                            instant,
                            measure,
                            sample,
                            raw: *raw,
                            normalized: table.normalized[i][sample],
                            normalizable: !table.skipped.contains(&measure),
                        });
                    }
                }
            }
            out.table("comparison", g.format, &lines)?;
            println!("{} rows over {} measures", lines.len(), ms.len());
            json!({ "instants": instants, "measures": ms })
        }
    };
    Ok(Report { config_path: None, summary })
}
