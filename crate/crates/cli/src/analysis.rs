//! `estimate` and the original-versus-mean-modified `analyze` workflow.

use std::io::Write;

use clap::{Args, ValueEnum};
use serde::Serialize;

use robustlm::estimators::{
    estimate, estimate_after_difference, BandwidthSpec, DEstimate, EstimatorKind,
};
use robustlm::spectral::{WindowKind, WindowSpec};
use robustlm::{QnConfig, TimeSeries};

use crate::error::CliError;
use crate::input::load;
use crate::output::open;
use crate::series::{mean_modified, InputArgs};

pub const MIN_LENGTH: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Gph,
    Gphr,
    All,
}

impl Method {
    fn kinds(self) -> &'static [EstimatorKind] {
        match self {
            Method::Gph => &[EstimatorKind::Gph],
            Method::Gphr => &[EstimatorKind::Gphr],
            Method::All => &[EstimatorKind::Gph, EstimatorKind::Gphr],
        }
    }
}

#[derive(Debug, Args)]
pub struct EstimatorArgs {
    #[arg(long, value_enum, default_value_t = Method::All)]
    pub method: Method,
    /// Bandwidth exponents, comma separated; one row each.
    #[arg(long, value_delimiter = ',', default_value = "0.7")]
    pub alpha: Vec<f64>,
    /// Truncation exponent of the robust lag window.
    #[arg(long, default_value_t = 0.7)]
    pub beta: f64,
    #[arg(long, default_value = "truncated")]
    pub window: WindowKind,
    /// Estimate on the first difference and add one.
    #[arg(long)]
    pub difference: bool,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateRow {
    pub method: String,
    pub alpha: f64,
    /// Truncation point of the robust estimator.
    pub truncation: Option<usize>,
    pub window: Option<WindowKind>,
    pub estimate: DEstimate,
}

fn check_length(x: &TimeSeries) -> Result<(), CliError> {
    if x.len() < MIN_LENGTH {
        return Err(CliError::Input(format!(
            "need at least {MIN_LENGTH} observations, got {}",
            x.len()
        )));
    }
    Ok(())
}

/// Every requested (estimator, alpha) pair, estimator-major.
pub fn estimate_rows(x: &TimeSeries, args: &EstimatorArgs) -> Result<Vec<EstimateRow>, CliError> {
    check_length(x)?;
    let analysed = if args.difference { x.len() - 1 } else { x.len() };
    let window = WindowSpec::from_beta(args.window, analysed, args.beta)?;
    let config = QnConfig::default();
    let mut rows = Vec::new();
    for &kind in args.method.kinds() {
        for &alpha in &args.alpha {
            let bw = BandwidthSpec::Alpha(alpha);
            let est = if args.difference {
                estimate_after_difference(x, kind, bw, &window, &config)?
            } else {
                estimate(x, kind, bw, &window, &config)?
            };
            let robust = kind == EstimatorKind::Gphr;
            rows.push(EstimateRow {
                method: kind.to_string(),
                alpha,
                truncation: robust.then_some(window.m),
                window: robust.then_some(args.window),
                estimate: est,
            });
        }
    }
    Ok(rows)
}

fn dash<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn write_table(out: &mut dyn Write, rows: &[EstimateRow]) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<6} {:<13} {:>5} {:>5} {:>5} {:>10} {:>10} {:>10} {:>7}",
        "method", "window", "alpha", "m'", "M", "d_hat", "se_ols", "se_asymp", "dropped"
    )?;
    for r in rows {
        let e = &r.estimate;
        writeln!(
            out,
            "{:<6} {:<13} {:>5} {:>5} {:>5} {:>10.4} {:>10.4} {:>10.4} {:>7}",
            r.method,
            dash(r.window),
            r.alpha,
            e.m_prime_used,
            dash(r.truncation),
            e.d_hat,
            e.se_ols,
            e.se_asymptotic,
            e.dropped_frequencies
        )?;
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
}

pub fn estimate_cmd(args: &EstimateArgs) -> Result<(), CliError> {
    let data = load(&args.input.input, &args.input.column)?;
    let rows = estimate_rows(&data.series, &args.estimator)?;
    let mut out = open(None)?;
    if args.estimator.json {
        serde_json::to_writer_pretty(&mut out, &rows)
            .map_err(|e| CliError::Output(e.into()))?;
        writeln!(out)?;
    } else {
        writeln!(
            out,
            "# {} column={} n={}",
            data.path.display(),
            data.column,
            data.series.len()
        )?;
        write_table(&mut out, &rows)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// 0-based positions of suspected outliers, replaced by the series mean.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub indices: Vec<usize>,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub method: String,
    pub alpha: f64,
    pub original: f64,
    pub modified: f64,
    pub shift: f64,
}

/// Estimates on the original series and on the mean-modified one, side by
/// side.
pub fn compare(
    x: &TimeSeries,
    indices: &[usize],
    args: &EstimatorArgs,
) -> Result<Vec<ComparisonRow>, CliError> {
    let original = estimate_rows(x, args)?;
    let modified = estimate_rows(&mean_modified(x, indices)?, args)?;
    Ok(original
        .iter()
        .zip(&modified)
        .map(|(o, m)| ComparisonRow {
            method: o.method.clone(),
            alpha: o.alpha,
            original: o.estimate.d_hat,
            modified: m.estimate.d_hat,
            shift: m.estimate.d_hat - o.estimate.d_hat,
        })
        .collect())
}

pub fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let data = load(&args.input.input, &args.input.column)?;
    let rows = compare(&data.series, &args.indices, &args.estimator)?;
    let mut out = open(None)?;
    if args.estimator.json {
        serde_json::to_writer_pretty(&mut out, &rows).map_err(|e| CliError::Output(e.into()))?;
        writeln!(out)?;
    } else {
        writeln!(
            out,
            "# {} n={} replaced={}",
            data.path.display(),
            data.series.len(),
            crate::output::list(&args.indices)
        )?;
        writeln!(
            out,
            "{:<6} {:>5} {:>10} {:>10} {:>10}",
            "method", "alpha", "original", "modified", "shift"
        )?;
        for r in &rows {
            writeln!(
                out,
                "{:<6} {:>5} {:>10.4} {:>10.4} {:>10.4}",
                r.method, r.alpha, r.original, r.modified, r.shift
            )?;
        }
    }
    out.flush()?;
    Ok(())
}
