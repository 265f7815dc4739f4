//! `qem`: run identity checks on a catalog model and print a report.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qem_core::runner::{self, RunConfig, DEFAULT_POINTS};
use qem_core::{Error, Suite};

#[derive(Parser)]
#[command(name = "qem", version, about = "Curvature identity checks on quasi-Einstein model metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run check suites on a model.
    Check(CheckArgs),
    /// List catalog models with their default parameters.
    ListModels,
    /// List every check with its tolerance and formula.
    ListChecks,
    /// Admissible constant scalar curvatures for given n, m, lambda.
    ListScalars {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// Any other model parameter, as name=value (e.g. alpha=0.8).
    #[arg(long = "param", value_parser = parse_pair)]
    params: Vec<(String, f64)>,
    /// Suite to run; repeat for several. Default: all.
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    /// Tolerance override, as check-name=value.
    #[arg(long = "tol", value_parser = parse_pair)]
    tolerances: Vec<(String, f64)>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad value in {s:?}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn config_from(args: &CheckArgs) -> Result<RunConfig, Error> {
    let mut params = BTreeMap::new();
    for (k, v) in [("n", args.n), ("m", args.m), ("lambda", args.lambda), ("p", args.p), ("q", args.q)] {
        if let Some(v) = v {
            params.insert(k.to_string(), v);
        }
    }
    for (k, v) in &args.params {
        params.insert(k.clone(), *v);
    }
    let suites = args.suites.iter().map(|s| s.parse::<Suite>()).collect::<Result<Vec<_>, _>>()?;
    Ok(RunConfig {
        model: args.model.clone(),
        params,
        suites,
        points: args.points,
        tolerances: args.tolerances.iter().cloned().collect(),
    })
}

fn check(args: &CheckArgs) -> Result<bool, Error> {
    let config = config_from(args)?;
    let start = Instant::now();
    let report = runner::run(&config)?;
    eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    let body = match args.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    match &args.output {
        Some(path) => std::fs::write(path, body).map_err(|e| Error::config("output", format!("{}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Check(args) => check(args),
        Command::ListModels => {
            print!("{}", runner::list_models());
            Ok(true)
        }
        Command::ListChecks => {
            print!("{}", runner::list_checks());
            Ok(true)
        }
        Command::ListScalars { n, m, lambda } => runner::list_scalars(*n, *m, *lambda).map(|s| {
            print!("{s}");
            true
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
