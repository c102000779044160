use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use serde_json::json;

use lexmv_core::robustness::{CompiledFormula, Measure, MeasureConfig, Nu};
use lexmv_core::stl::{boolean_sat_all_times, is_valid_identifier, parse_formula, Predicate, PredicateRegistry, Trace};
use lexmv_core::systems::{Scenario, System};

use crate::failure::{CmdResult, Failure};
use crate::output::{num, Format, Outputs};
use crate::{Globals, Report};

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Formula, e.g. `G[0,5](and(a, b))`.
    pub formula: String,
    /// Trace CSV with a header row. Columns `k` and `t` are skipped.
    pub trace: PathBuf,
    #[arg(long, default_value = "space")]
    pub measure: String,
    /// Operator parameter override, e.g. `--nu nu5=1.0`.
    #[arg(long, value_name = "KEY=VALUE")]
    pub nu: Vec<String>,
    /// Take predicates from this scenario instead of the column names.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Sampling period (default: from the `t` column, else 1).
    #[arg(long)]
    pub dt: Option<f64>,
    /// Time step to evaluate at.
    #[arg(long, default_value_t = 0)]
    pub at: usize,
    /// Evaluate at every time step.
    #[arg(long)]
    pub all_times: bool,
}

struct CsvTrace {
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
    times: Option<Vec<f64>>,
}

fn read_trace(path: &Path) -> CmdResult<CsvTrace> {
    let bad = |msg: String| Failure::input(format!("{}: {msg}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let header: Vec<String> = reader.headers().map_err(|e| bad(e.to_string()))?.iter().map(|h| h.trim().to_string()).collect();
    let keep: Vec<usize> = (0..header.len()).filter(|&i| header[i] != "k" && header[i] != "t").collect();
    let t_col = header.iter().position(|h| h == "t");
    let mut rows = Vec::new();
    let mut times = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let line = i + 2;
        let value = |j: usize| -> CmdResult<f64> {
            let s = rec.get(j).unwrap_or("").trim();
            s.parse::<f64>().map_err(|_| bad(format!("line {line}, column {}: `{s}` is not a number", j + 1)))
        };
        rows.push(keep.iter().map(|&j| value(j)).collect::<CmdResult<Vec<f64>>>()?);
        if let Some(j) = t_col {
            times.push(value(j)?);
        }
    }
    if keep.is_empty() {
        return Err(bad("no signal columns".into()));
    }
    Ok(CsvTrace { names: keep.iter().map(|&i| header[i].clone()).collect(), rows, times: t_col.map(|_| times) })
}

fn parse_nu(overrides: &[String]) -> CmdResult<Option<Nu<f64>>> {
    if overrides.is_empty() {
        return Ok(None);
    }
    let mut nu = Nu::default();
    for o in overrides {
        let (key, value) = o.split_once('=').ok_or_else(|| Failure::input(format!("--nu: expected KEY=VALUE, got `{o}`")))?;
        let v: f64 = value.trim().parse().map_err(|_| Failure::input(format!("--nu: `{value}` is not a number")))?;
        match key.trim() {
            "nu1" => nu.nu1 = v,
            "nu2" => nu.nu2 = v,
            "nu3" => nu.nu3 = v,
            "nu4" => nu.nu4 = v,
            "nu5" => nu.nu5 = v,
            other => return Err(Failure::input(format!("--nu: unknown parameter `{other}` (expected nu1..nu5)"))),
        }
    }
    Ok(Some(nu))
}

#[derive(Serialize)]
struct Row {
    k: usize,
    robustness: f64,
    verdict: bool,
}

pub fn run(args: &EvalArgs, g: &Globals, out: &mut Outputs) -> CmdResult<Report> {
    let measure: Measure = args.measure.parse()?;
    let mut config: MeasureConfig<f64> = measure.config();
    if let Some(nu) = parse_nu(&args.nu)? {
        config = config.with_nu(nu);
    }
    config.validate()?;
    let csv = read_trace(&args.trace)?;
    let dt = match (args.dt, &csv.times) {
        (Some(dt), _) => dt,
        (None, Some(t)) if t.len() >= 2 => t[1] - t[0],
        _ => 1.0,
    };
    let trace = Trace::from_rows(&csv.rows, dt)?;
    let registry = match &args.scenario {
        Some(path) => {
            let s = Scenario::from_path(path)?;
            if trace.n_y() != s.system().n_y() {
                return Err(Failure::input(format!(
                    "the trace has {} signal columns but the scenario's system has {} outputs",
                    trace.n_y(),
                    s.system().n_y()
                )));
            }
            s.registry_at(0.0)?
        }
        None => {
            let mut reg = PredicateRegistry::new();
            for (i, name) in csv.names.iter().enumerate() {
                if !is_valid_identifier(name) {
                    return Err(Failure::input(format!("column `{name}` is not a valid predicate name")));
                }
                reg.insert(Predicate::channel_at_least(name.as_str(), i, 0.0));
            }
            reg
        }
    };
    let formula = parse_formula(&args.formula, &registry)?;
    let compiled = CompiledFormula::new(&formula);
    let values = compiled.robustness_all_times(&config, &trace);
    let verdicts = boolean_sat_all_times(&formula, &trace);
    let ks: Vec<usize> = if args.all_times { (0..=trace.horizon()).collect() } else { vec![args.at] };
    trace.check_time(*ks.last().unwrap_or(&0))?;
    let rows: Vec<Row> = ks.iter().map(|&k| Row { k, robustness: values[k].to_float(), verdict: verdicts[k] }).collect();

    match g.format {
        Format::Csv => {
            println!("k,robustness,verdict");
            for r in &rows {
                println!("{},{},{}", r.k, num(r.robustness), r.verdict);
            }
        }
        Format::Json => {
            let text = serde_json::to_string_pretty(&json!({ "formula": formula.to_string(), "measure": measure, "results": rows }))
                .map_err(|e| Failure::runtime(e.to_string()))?;
            println!("{text}");
        }
    }
    out.table("eval", g.format, &rows)?;
    Ok(Report {
        config_path: args.scenario.clone(),
        summary: json!({
            "formula": formula.to_string(),
            "measure": measure,
            "trace": args.trace,
            "robustness": rows.first().map(|r| r.robustness),
            "verdict": rows.first().map(|r| r.verdict),
        }),
    })
}
