//! `lifeinfo`: grid sweeps of dynamic information measures.

mod catalog;
mod config;
mod error;
mod expr;
mod measure;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use config::{Format, Overrides, RunConfig};
use error::CliError;
use measure::Record;

#[derive(Parser)]
#[command(name = "lifeinfo", version, about = "Dynamic mutual information and entropies of bivariate lifetimes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a measure over a grid and write CSV or JSON.
    Run(RunArgs),
    /// Print the supported model families and their parameters.
    ListModels,
    /// Print the supported measures and what they compute.
    ListMeasures,
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON run configuration; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Model expression, e.g. "os(n=3, uniform)".
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    measure: Option<String>,
    /// "min:max:steps" for both axes, or "AXIS1,AXIS2" where AXIS2 may be
    /// same, diagonal or complement; "[v1;v2;...]" lists values.
    #[arg(long)]
    grid: Option<String>,
    /// Relative quadrature tolerance (the absolute one is 1% of it).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte-Carlo sample count (mc-validate).
    #[arg(long)]
    samples: Option<usize>,
    /// Conditioning region for mixed-entropy, bounds and mc-validate.
    #[arg(long)]
    region: Option<String>,
    /// Computation route: closed-form or direct (os-mi), quadrature or tte (residual-mi).
    #[arg(long)]
    route: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

/// Exit status when some grid point failed to converge.
const EXIT_PARTIAL: u8 = 2;

fn run(args: RunArgs) -> Result<ExitCode, CliError> {
    let file = match &args.config {
        Some(path) => config::load(path)?,
        None => RunConfig::default(),
    };
    let flags = Overrides {
        model: args.model,
        measure: args.measure,
        grid: args.grid,
        tol: args.tol,
        seed: args.seed,
        samples: args.samples,
        region: args.region,
        route: args.route,
        output: args.output,
        format: args.format,
    };
    let run = config::resolve(file, flags)?;
    for w in &run.warnings {
        eprintln!("warning: {w}");
    }

    let records: Vec<Record> = run.points.par_iter().enumerate().map(|(i, &(a, b))| measure::evaluate(&run, i, a, b)).collect();

    let axes = run.measure.axis_names();
    let mut failures = 0;
    for r in records.iter().filter(|r| !r.converged && !r.null_region) {
        failures += 1;
        let why = r.message().unwrap_or("did not converge");
        eprintln!("warning: {} at ({}={}, {}={}): {why}", run.measure.name(), axes.0, r.a, axes.1, r.b);
    }

    let sink: Box<dyn Write> = match &run.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match run.format {
        Format::Csv => output::write_csv(sink, axes, &records)?,
        Format::Json => output::write_json(sink, axes, &records)?,
    }

    if failures > 0 {
        eprintln!("{failures} of {} points of {} on {} did not converge", records.len(), run.measure.name(), run.model_text);
        Ok(ExitCode::from(EXIT_PARTIAL))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::ListModels => {
            print!("{}", catalog::listing());
            ExitCode::SUCCESS
        }
        Command::ListMeasures => {
            print!("{}", measure::listing());
            ExitCode::SUCCESS
        }
        Command::Run(args) => run(args).unwrap_or_else(|e| {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }),
    }
}
