//! Subcommands that produce or transform series and plot-ready columns.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};

use robustlm::acvf::{robust_acf, robust_acvf, sample_acvf};
use robustlm::contamination::{contaminate, OutlierSpec, OutlierType};
use robustlm::model::{integrate, simulate_arfima};
use robustlm::spectral::{periodogram, robust_pseudo_periodogram, FourierGrid, WindowKind, WindowSpec};
use robustlm::{ArfimaSpec, QnConfig, TimeSeries};

use crate::error::CliError;
use crate::input::{load, ColumnSelector};
use crate::output::{list, open, write_series};

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV file, or `-` for stdin.
    pub input: PathBuf,
    /// Column name or 0-based index.
    #[arg(long, default_value = "0")]
    pub column: ColumnSelector,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub d: f64,
    /// AR coefficients, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phi: Vec<f64>,
    /// MA coefficients, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    /// Process mean; with `--integrate`, the starting level of the path.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mean: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    /// Simulate the first difference with memory `d - 1` and integrate it,
    /// for `0.5 < d < 1.5`.
    #[arg(long)]
    pub integrate: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    if args.n < 2 {
        return Err(CliError::Input(format!("n = {} is too short", args.n)));
    }
    let values = if args.integrate {
        if !(args.d > 0.5 && args.d < 1.5) {
            return Err(CliError::Input(format!(
                "--integrate needs 0.5 < d < 1.5, got d = {}",
                args.d
            )));
        }
        let spec = ArfimaSpec::new(args.d - 1.0, args.phi.clone(), args.theta.clone(), args.sigma2);
        let w = simulate_arfima(&spec, args.n - 1, args.seed)?;
        integrate(&w, args.mean)?.into_values()
    } else {
        if args.d >= 0.5 {
            return Err(CliError::Input(format!(
                "d = {} is non-stationary; pass --integrate to simulate an integrated path",
                args.d
            )));
        }
        let spec = ArfimaSpec::new(args.d, args.phi.clone(), args.theta.clone(), args.sigma2)
            .with_mean(args.mean);
        simulate_arfima(&spec, args.n, args.seed)?.into_values()
    };
    let header = vec![format!(
        "robustlm simulate d={} phi={} theta={} sigma2={} mean={} n={} seed={} integrate={}",
        args.d,
        list(&args.phi),
        list(&args.theta),
        args.sigma2,
        args.mean,
        args.n,
        args.seed,
        args.integrate
    )];
    write_series(args.out.as_deref(), &header, &values)
}

#[derive(Debug, Args)]
pub struct ContaminateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Outlier magnitudes, one per type.
    #[arg(long, value_delimiter = ',', required = true)]
    pub magnitude: Vec<f64>,
    /// Firing probabilities, one per type.
    #[arg(long, value_delimiter = ',', required = true)]
    pub probability: Vec<f64>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the shocks as `index,kind,sign` rows.
    #[arg(long)]
    pub hits: Option<PathBuf>,
}

pub fn contaminate_cmd(args: &ContaminateArgs) -> Result<(), CliError> {
    if args.magnitude.len() != args.probability.len() {
        return Err(CliError::Input(format!(
            "{} magnitudes but {} probabilities",
            args.magnitude.len(),
            args.probability.len()
        )));
    }
    let data = load(&args.input.input, &args.input.column)?;
    let spec = OutlierSpec::new(
        args.magnitude
            .iter()
            .zip(&args.probability)
            .map(|(&magnitude, &probability)| OutlierType {
                magnitude,
                probability,
            })
            .collect(),
    )?;
    let z = contaminate(&data.series, &spec, args.seed);
    let header = vec![format!(
        "robustlm contaminate input={} magnitude={} probability={} seed={} shocks={}",
        data.path.display(),
        list(&args.magnitude),
        list(&args.probability),
        args.seed,
        z.hits().len()
    )];
    write_series(args.out.as_deref(), &header, z.values())?;
    if let Some(path) = &args.hits {
        let mut out = open(Some(path))?;
        writeln!(out, "index,kind,sign")?;
        for h in z.hits() {
            writeln!(out, "{},{},{}", h.index, h.kind, h.sign)?;
        }
        out.flush()?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AcfMethod {
    Classical,
    Robust,
    Both,
}

#[derive(Debug, Args)]
pub struct AcfArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 20)]
    pub max_lag: usize,
    #[arg(long, value_enum, default_value_t = AcfMethod::Both)]
    pub method: AcfMethod,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn acf(args: &AcfArgs) -> Result<(), CliError> {
    let x = load(&args.input.input, &args.input.column)?.series;
    if args.max_lag + 2 > x.len() {
        return Err(CliError::Input(format!(
            "max lag {} needs at least {} observations, got {}",
            args.max_lag,
            args.max_lag + 2,
            x.len()
        )));
    }
    let config = QnConfig::default();
    let classical = matches!(args.method, AcfMethod::Classical | AcfMethod::Both);
    let robust = matches!(args.method, AcfMethod::Robust | AcfMethod::Both);
    let mut out = open(args.out.as_deref())?;
    let mut header = vec!["lag"];
    if classical {
        header.extend(["acvf_classical", "acf_classical"]);
    }
    if robust {
        header.extend(["acvf_robust", "acf_robust"]);
    }
    writeln!(out, "{}", header.join(","))?;
    let gamma0 = sample_acvf(&x, 0)?;
    for h in 0..=args.max_lag {
        let mut row = vec![h.to_string()];
        if classical {
            let g = sample_acvf(&x, h)?;
            row.push(g.to_string());
            row.push((g / gamma0).to_string());
        }
        if robust {
            row.push(robust_acvf(&x, h, &config)?.to_string());
            row.push(robust_acf(&x, h, &config)?.to_string());
        }
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumMethod {
    Periodogram,
    Robust,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = SpectrumMethod::Periodogram)]
    pub method: SpectrumMethod,
    #[arg(long, default_value = "truncated")]
    pub window: WindowKind,
    /// Truncation point `M = floor(n^beta)`.
    #[arg(long, default_value_t = 0.7)]
    pub beta: f64,
    /// Number of Fourier frequencies; defaults to `floor(n / 2)`.
    #[arg(long)]
    pub frequencies: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn spectrum(args: &SpectrumArgs) -> Result<(), CliError> {
    let x: TimeSeries = load(&args.input.input, &args.input.column)?.series;
    let n = x.len();
    let grid = FourierGrid::lowest(n, args.frequencies.unwrap_or(n / 2))?;
    let estimate = match args.method {
        SpectrumMethod::Periodogram => periodogram(&x, &grid)?,
        SpectrumMethod::Robust => {
            let window = WindowSpec::from_beta(args.window, n, args.beta)?;
            robust_pseudo_periodogram(&x, &window, &QnConfig::default(), &grid)?
        }
    };
    let mut out = open(args.out.as_deref())?;
    writeln!(out, "j,omega,value")?;
    for (k, v) in estimate.values.iter().enumerate() {
        writeln!(out, "{},{},{}", k + 1, grid.omega(k + 1), v)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct ModifyMeanArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// 0-based positions to replace, comma separated; may be empty.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub indices: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Replaces `indices` by the mean of the original series.
pub fn mean_modified(x: &TimeSeries, indices: &[usize]) -> Result<TimeSeries, CliError> {
    let mean = x.mean();
    let mut values = x.values().to_vec();
    for &i in indices {
        let slot = values.get_mut(i).ok_or_else(|| {
            CliError::Input(format!("index {i} out of range for {} observations", x.len()))
        })?;
        *slot = mean;
    }
    Ok(TimeSeries::new(values)?)
}

pub fn modify_mean(args: &ModifyMeanArgs) -> Result<(), CliError> {
    let data = load(&args.input.input, &args.input.column)?;
    let modified = mean_modified(&data.series, &args.indices)?;
    let header = vec![format!(
        "robustlm modify-mean input={} mean={} replaced={}",
        data.path.display(),
        data.series.mean(),
        list(&args.indices)
    )];
    write_series(args.out.as_deref(), &header, modified.values())
}
