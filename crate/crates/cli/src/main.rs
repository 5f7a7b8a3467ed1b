use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use maxstar::TNormSpec;
use maxstar_cli::{
    load_scenario, parse_tnorm, render, run_scenario, write_csv, CliError, Overrides, EXIT_INVALID,
};

/// Runs a max-∗ measure scenario and writes a JSON report.
///
/// Exit status: 0 passed or succeeded, 1 failed property or lift out of
/// reach, 2 invalid input.
#[derive(Parser, Debug)]
#[command(name = "maxstar", version)]
struct Args {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,

    /// Report path; overrides the scenario's `output`. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// T-norm name (min, product, lukasiewicz, sectionT) or JSON spec.
    #[arg(long, value_parser = tnorm_arg)]
    tnorm: Option<TNormSpec>,

    /// Seed for randomized suites.
    #[arg(long)]
    seed: Option<u64>,

    /// Grid resolution for `certify`.
    #[arg(long)]
    resolution: Option<f64>,

    /// Write the evaluated grid of `certify` as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn tnorm_arg(s: &str) -> Result<TNormSpec, String> {
    parse_tnorm(s).map_err(|e| e.to_string())
}

fn run(args: Args) -> Result<u8, CliError> {
    let scenario = load_scenario(&args.scenario)?;
    let over = Overrides {
        tnorm: args.tnorm,
        seed: args.seed,
        resolution: args.resolution,
        output: args.out,
        csv: args.csv,
    };
    let outcome = run_scenario(&scenario, &over)?;
    let text = render(&outcome.report);
    match over.output.or(scenario.output) {
        Some(path) => std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if let Some(path) = over.csv {
        match &outcome.grid {
            Some((header, rows)) => write_csv(&path, header, rows)?,
            None => return Err(CliError::Schema("--csv applies to certify only".into())),
        }
    }
    Ok(outcome.status)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    match run(args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("maxstar: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
