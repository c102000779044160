use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use serde_json::json;

use lexmv_core::lexscalar::SpecSet;
use lexmv_core::robustness::Measure;
use lexmv_core::solver::{solve, IterationRecord};
use lexmv_core::stl::Trace;
use lexmv_core::systems::{mpc_loop, MpcStep, Scenario, SystemModel};

use crate::failure::{CmdResult, Failure};
use crate::output::{num, Outputs};
use crate::{Globals, Report};

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Scenario file (TOML).
    pub scenario: PathBuf,
    /// Number of MPC steps (default: the scenario's `mpc.steps`).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Robustness measure for every specification, overriding the file.
    #[arg(long)]
    pub measure: Option<String>,
    /// Solver iterations per plan.
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Solve once over the horizon instead of running the MPC loop.
    #[arg(long)]
    pub open_loop: bool,
}

#[derive(Serialize)]
struct SpecResult {
    name: String,
    robustness: f64,
    continuous: f64,
    discrete: u64,
}

#[derive(Serialize)]
struct Diagnostics<'a> {
    scenario: &'a str,
    measure: Option<Measure>,
    seed: u64,
    open_loop: bool,
    specs: &'a [SpecResult],
    scalar_cost: String,
    /// One entry per MPC step; empty for open-loop runs.
    steps: &'a [MpcStep],
    /// Solver iterations of an open-loop run.
    iterations: &'a [IterationRecord],
    executed_inputs: &'a [Vec<f64>],
}

pub fn channel_names(model: &SystemModel) -> Vec<String> {
    let names: &[&str] = match model {
        SystemModel::SingleTrack(_) => &["x", "y", "theta", "delta", "v", "v_delta", "a"],
        SystemModel::Integrator(_) => &["y"],
    };
    names.iter().map(|s| s.to_string()).collect()
}

/// `k`, `t`, then one column per output channel.
fn trace_records(trace: &Trace<f64>) -> Vec<Vec<String>> {
    (0..=trace.horizon())
        .map(|k| {
            let mut r = vec![k.to_string(), num(k as f64 * trace.dt())];
            r.extend(trace.row(k).iter().map(|v| num(*v)));
            r
        })
        .collect()
}

fn load(path: &Path) -> CmdResult<Scenario> {
    Scenario::from_path(path).map_err(|e| match Failure::from(e) {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn run(args: &PlanArgs, g: &Globals, out: &mut Outputs) -> CmdResult<Report> {
    let scenario = load(&args.scenario)?;
    let measure = args.measure.as_deref().map(str::parse::<Measure>).transpose()?;
    let mut cfg = scenario.solver_config()?;
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(j) = args.iterations {
        cfg.iterations = j;
    }
    cfg.validate()?;
    let specs: SpecSet<f64> = scenario.spec_set_at(0, measure)?;

    let (trace, steps, iterations, inputs) = if args.open_loop {
        let r = solve(scenario.system(), &specs, scenario.initial_state(), &scenario.initial_inputs(), &cfg)?;
        let sol = r.solution();
        let n_u = cfg.n_u();
        let inputs: Vec<Vec<f64>> = sol.inputs.chunks(n_u).map(|c| c.to_vec()).collect();
        (sol.trace.clone(), Vec::new(), r.iterations.clone(), inputs)
    } else {
        let steps = args.steps.unwrap_or(scenario.mpc_steps());
        if steps == 0 {
            return Err(Failure::input("--steps must be positive"));
        }
        let run = mpc_loop(&scenario, &cfg, steps, measure)?;
        (run.executed, run.steps, Vec::new(), run.inputs)
    };

    let eval = specs.evaluate(&trace)?;
    let results: Vec<SpecResult> = specs
        .specs()
        .iter()
        .enumerate()
        .map(|(i, s)| SpecResult {
            name: s.name.clone(),
            robustness: eval.robustness[i].to_float(),
            continuous: eval.continuous[i],
            discrete: eval.discrete[i],
        })
        .collect();

    let mut header = vec!["k".to_string(), "t".to_string()];
    header.extend(channel_names(scenario.system()));
    out.csv_records("trace.csv", &header, &trace_records(&trace))?;
    out.json(
        "diagnostics.json",
        &Diagnostics {
            scenario: scenario.name(),
            measure,
            seed: cfg.seed,
            open_loop: args.open_loop,
            specs: &results,
            scalar_cost: eval.scalar.to_string(),
            steps: &steps,
            iterations: &iterations,
            executed_inputs: &inputs,
        },
    )?;

    let names: Vec<&str> = results.iter().map(|r| r.name.as_str()).collect();
    println!("scenario {} ({} steps{})", scenario.name(), trace.horizon(), if args.open_loop { ", open loop" } else { "" });
    println!("specs    {}", names.join(" > "));
    println!("discrete {:?}", eval.discrete);
    println!("scalar   {}", eval.scalar);
    Ok(Report {
        config_path: Some(args.scenario.clone()),
        summary: json!({
            "scenario": scenario.name(),
            "discrete": eval.discrete,
            "scalar_cost": eval.scalar.to_string(),
            "seed": cfg.seed,
        }),
    })
}
