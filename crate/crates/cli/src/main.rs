//! `lexmv`: planning, oracles, benchmarks and a standalone monitor.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 runtime failure. Every run
//! writes `manifest.json` into the output directory.

mod bench;
mod eval;
mod failure;
mod manifest;
mod oracle;
mod output;
mod plan;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use failure::{CmdResult, Failure};
use manifest::{unix_now, RunManifest, MANIFEST_FILE};
use output::{Format, Outputs};

#[derive(Debug, Parser)]
#[command(name = "lexmv", version, about = "Lexicographic minimum-violation planning with signal temporal logic")]
struct Cli {
    /// Seed override; commands fall back to their config or to 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value = "lexmv-out")]
    output_dir: PathBuf,
    /// Format of tabular outputs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the MPC loop (or a single solve) on a scenario file.
    Plan(plan::PlanArgs),
    /// Benchmark studies.
    Bench {
        #[command(subcommand)]
        study: bench::Study,
    },
    /// Evaluate a formula on a trace CSV.
    Eval(eval::EvalArgs),
    /// Exact lexicographic optima of random integrator benchmarks.
    Oracle(oracle::OracleArgs),
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Plan(_) => "plan".into(),
            Command::Bench { study } => format!("bench {}", study.name()),
            Command::Eval(_) => "eval".into(),
            Command::Oracle(_) => "oracle".into(),
        }
    }
}

/// What a successful command reports back for the manifest.
pub struct Report {
    pub config_path: Option<PathBuf>,
    pub summary: serde_json::Value,
}

/// Settings shared by every command.
pub struct Globals {
    pub seed: Option<u64>,
    pub format: Format,
}

fn dispatch(cli: &Cli, out: &mut Outputs) -> CmdResult<Report> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::input("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::runtime(format!("cannot start the thread pool: {e}")))?;
    }
    let g = Globals { seed: cli.seed, format: cli.format };
    match &cli.command {
        Command::Plan(a) => plan::run(a, &g, out),
        Command::Bench { study } => bench::run(study, &g, out),
        Command::Eval(a) => eval::run(a, &g, out),
        Command::Oracle(a) => oracle::run(a, &g, out),
    }
}

fn main() {
    let cli = Cli::parse();
    let started = unix_now();
    let mut out = match Outputs::new(&cli.output_dir) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    };
    let result = dispatch(&cli, &mut out);
    let (exit_code, error, report) = match result {
        Ok(r) => (0, None, r),
        Err(e) => {
            eprintln!("error: {e}");
            (e.exit_code(), Some(e.to_string()), Report { config_path: None, summary: serde_json::Value::Null })
        }
    };
    let manifest = RunManifest {
        manifest_version: 1,
        tool: "lexmv",
        cli_version: env!("CARGO_PKG_VERSION"),
        core_version: lexmv_core::VERSION,
        command: cli.command.name(),
        argv: std::env::args().collect(),
        config_path: report.config_path,
        seed: cli.seed,
        threads: cli.threads,
        format: cli.format,
        started_unix_s: started,
        finished_unix_s: unix_now(),
        outputs: out.written().to_vec(),
        exit_code,
        error,
        summary: report.summary,
    };
    if let Err(e) = out.json(MANIFEST_FILE, &manifest) {
        eprintln!("error: {e}");
        std::process::exit(failure::EXIT_RUNTIME);
    }
    std::process::exit(exit_code);
}
