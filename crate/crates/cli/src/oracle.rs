use clap::Args;
use serde::Serialize;
use serde_json::json;

use lexmv_core::bench::benchmark_population;
use lexmv_core::lexscalar::Layout;
use lexmv_core::oracle::{violation_error, CostMode, LexOptimum, LinearBenchmark};

use crate::failure::{CmdResult, Failure};
use crate::output::{joined, parse_list, Format, Outputs};
use crate::{Globals, Report};

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Number of random benchmarks (thresholds uniform in [-3, 3]).
    #[arg(long, default_value_t = 10)]
    pub scenarios: usize,
    #[arg(long, default_value_t = 8)]
    pub n_specs: usize,
    /// Violation intervals per specification: one value for all, or a comma list.
    #[arg(long, default_value = "5")]
    pub m: String,
    /// Solve this single benchmark instead, e.g. `--thresholds 1.2,-0.5,2`.
    #[arg(long, allow_hyphen_values = true)]
    pub thresholds: Option<String>,
    #[arg(long, default_value_t = 10.0)]
    pub c_bar: f64,
}

#[derive(Serialize)]
struct Record {
    index: usize,
    thresholds: Vec<f64>,
    m: Vec<usize>,
    optimal_scalar: String,
    violation_error: f64,
    continuous: LexOptimum,
    discretized: LexOptimum,
}

#[derive(Serialize)]
struct FlatRecord {
    index: usize,
    thresholds: String,
    m: String,
    continuous_costs: String,
    discrete: String,
    optimal_scalar: String,
    violation_error: f64,
    witness: String,
}

pub fn run(args: &OracleArgs, g: &Globals, out: &mut Outputs) -> CmdResult<Report> {
    let benches: Vec<LinearBenchmark> = match &args.thresholds {
        Some(t) => vec![LinearBenchmark { c_bar: args.c_bar, ..LinearBenchmark::new(parse_list("thresholds", t)?)? }],
        None => {
            if args.scenarios == 0 || args.n_specs == 0 {
                return Err(Failure::input("--scenarios and --n-specs must be positive"));
            }
            benchmark_population(g.seed.unwrap_or(0), args.scenarios, args.n_specs)?
                .into_iter()
                .map(|b| LinearBenchmark { c_bar: args.c_bar, ..b })
                .collect()
        }
    };
    let n = benches[0].horizon();
    let m: Vec<usize> = match parse_list::<usize>("m", &args.m)?.as_slice() {
        [one] => vec![*one; n],
        many if many.len() == n => many.to_vec(),
        many => return Err(Failure::input(format!("--m lists {} values for {n} specifications", many.len()))),
    };
    if m.contains(&0) {
        return Err(Failure::input("--m values must be positive"));
    }
    let layout = Layout::new(&m.iter().map(|&v| v as u64).collect::<Vec<_>>())?;

    let mut records = Vec::with_capacity(benches.len());
    for (index, b) in benches.iter().enumerate() {
        b.validate()?;
        let schemes = b.schemes(&m)?;
        let continuous = b.exact_lex_optimum(CostMode::Continuous)?;
        let discretized = b.exact_lex_optimum(CostMode::Discretized(&schemes))?;
        let optimal_scalar = layout.pack(discretized.discrete.as_deref().unwrap_or_default())?.to_string();
        records.push(Record {
            index,
            thresholds: b.thresholds.clone(),
            m: m.clone(),
            optimal_scalar,
            violation_error: violation_error(&continuous, &discretized),
            continuous,
            discretized,
        });
    }
    match g.format {
        Format::Json => {
            out.json("oracle.json", &records)?;
        }
        Format::Csv => {
            let flat: Vec<FlatRecord> = records
                .iter()
                .map(|r| FlatRecord {
                    index: r.index,
                    thresholds: joined(&r.thresholds, ";"),
                    m: joined(&r.m, ";"),
                    continuous_costs: joined(&r.continuous.continuous, ";"),
                    discrete: joined(r.discretized.discrete.as_deref().unwrap_or_default(), ";"),
                    optimal_scalar: r.optimal_scalar.clone(),
                    violation_error: r.violation_error,
                    witness: joined(&r.discretized.witness, ";"),
                })
                .collect();
            out.csv("oracle.csv", &flat)?;
        }
    }
    let mean_error = records.iter().map(|r| r.violation_error).sum::<f64>() / records.len() as f64;
    println!("{} benchmarks, K = {n}, mean violation error {mean_error}", records.len());
    Ok(Report { config_path: None, summary: json!({ "benchmarks": records.len(), "m": m, "mean_violation_error": mean_error }) })
}
