//! `robustlm`: robust estimation of the memory parameter `d` from the
//! command line.
//!
//! Exit status: 0 on success, 1 when an estimator refuses to compute
//! (e.g. too few positive spectral ordinates), 2 on input errors.

mod analysis;
mod error;
mod input;
mod mc;
mod output;
mod series;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "robustlm", version, about = "Robust long-memory estimation under additive outliers")]
struct Cli {
    /// Worker threads for Monte Carlo runs.
    #[arg(long, global = true, env = "ROBUSTLM_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate an ARFIMA(p, d, q) path.
    Simulate(series::SimulateArgs),
    /// Add random additive outliers to a series.
    Contaminate(series::ContaminateArgs),
    /// Classical and robust autocovariances and autocorrelations.
    Acf(series::AcfArgs),
    /// Periodogram or robust pseudo-periodogram at the Fourier frequencies.
    Spectrum(series::SpectrumArgs),
    /// Estimate d with GPH and/or GPHR.
    Estimate(analysis::EstimateArgs),
    /// Replace the given observations by the series mean.
    ModifyMean(series::ModifyMeanArgs),
    /// Compare estimates on the original and the mean-modified series.
    Analyze(analysis::AnalyzeArgs),
    /// Run a Monte Carlo study from a JSON config.
    Mc(mc::McArgs),
}

fn configure_threads(threads: Option<usize>) -> Result<(), CliError> {
    let Some(threads) = threads else {
        return Ok(());
    };
    if threads == 0 {
        return Err(CliError::Input("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    configure_threads(cli.threads)?;
    match &cli.command {
        Command::Simulate(a) => series::simulate(a),
        Command::Contaminate(a) => series::contaminate_cmd(a),
        Command::Acf(a) => series::acf(a),
        Command::Spectrum(a) => series::spectrum(a),
        Command::Estimate(a) => analysis::estimate_cmd(a),
        Command::ModifyMean(a) => series::modify_mean(a),
        Command::Analyze(a) => analysis::analyze(a),
        Command::Mc(a) => mc::mc(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
