use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use subriemann::interface::{parse_manifest_with, run, Command, RunOptions};
use subriemann::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "subriemann", version, about = "Growth vectors, nilpotent approximations and Hausdorff volume verdicts")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Growth vectors and point classes.
    Flags(Args),
    /// Restricted flags and equiregularity of submanifolds.
    Strata(Args),
    /// Nonholonomic orders and sigma.
    Sigma(Args),
    /// Privileged chart and nilpotent approximation.
    Nilpotent(Args),
    /// Hausdorff dimension and finiteness of the volume of small balls.
    Verdict(Args),
    /// Numeric cross-checks of the exact results.
    Probe(Args),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Machine,
}

#[derive(clap::Args, Debug)]
struct Args {
    /// Manifest file.
    manifest: PathBuf,
    /// Point name or comma-separated coordinates; repeatable.
    #[arg(long = "point")]
    points: Vec<String>,
    /// Restrict stratum work and charts to this submanifold.
    #[arg(long)]
    submanifold: Option<String>,
    /// Parameter binding NAME=INTEGER; repeatable.
    #[arg(long = "param", value_parser = parse_binding)]
    params: Vec<(String, i64)>,
    /// Longest bracket length for the flag.
    #[arg(long)]
    cap_step: Option<usize>,
    /// Longest derivative word in order computations.
    #[arg(long)]
    cap_order: Option<usize>,
    /// Sample count for equiregularity and order checks.
    #[arg(long)]
    samples: Option<usize>,
    /// Probe seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Reachability samples per scale for the dimension probe.
    #[arg(long)]
    probe_samples: Option<usize>,
    /// Probe neighbourhood radius.
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for CSV dumps of probe series.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn parse_binding(s: &str) -> std::result::Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got '{s}'"))?;
    let v = v.trim().parse().map_err(|_| format!("'{v}' is not an integer"))?;
    Ok((k.trim().to_string(), v))
}

fn execute(command: Command, args: &Args) -> Result<i32> {
    let text = std::fs::read_to_string(&args.manifest)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", args.manifest.display())))?;
    let manifest = parse_manifest_with(&text, &args.params)?;
    let opts = RunOptions {
        points: args.points.clone(),
        submanifold: args.submanifold.clone(),
        cap_step: args.cap_step,
        cap_order: args.cap_order,
        samples: args.samples,
        seed: args.seed,
        probe_samples: args.probe_samples,
        rho: args.rho,
        csv_dir: args.csv.clone(),
    };
    let outcome = run(command, &manifest, &opts)?;
    let body = match args.format {
        Format::Text => outcome.report.to_text(),
        Format::Machine => outcome.report.to_json() + "\n",
    };
    match &args.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (command, args) = match &cli.command {
        Cmd::Flags(a) => (Command::Flags, a),
        Cmd::Strata(a) => (Command::Strata, a),
        Cmd::Sigma(a) => (Command::Sigma, a),
        Cmd::Nilpotent(a) => (Command::Nilpotent, a),
        Cmd::Verdict(a) => (Command::Verdict, a),
        Cmd::Probe(a) => (Command::Probe, a),
    };
    match execute(command, args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
