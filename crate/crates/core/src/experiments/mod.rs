//! Seeded Monte Carlo studies of the `d` estimators.
//!
//! Each replicate simulates one base series, optionally adds outliers to a
//! copy of it, and runs every configured estimator on both versions (paired
//! design). Replicates run in parallel; results are collected in replicate
//! order and aggregated with compensated summation, so reports do not depend
//! on the thread count.

pub mod report;
pub mod tables;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acvf::{acvf_curve, AcvfMethod};
use crate::contamination::{contaminate, OutlierSpec};
use crate::error::{Error, Result};
use crate::estimators::{gph, gph_robust_from_acvf, BandwidthSpec, EstimatorKind};
use crate::model::{difference, integrate, simulate_arfima, ArfimaSpec, TimeSeries};
use crate::qn::QnConfig;
use crate::seed::{replicate_seed, stream_seed, Stream};
use crate::spectral::window::DEFAULT_BETA;
use crate::spectral::{WindowKind, WindowSpec};

pub use report::{McCell, McReport};
pub use tables::reproduce_table;

/// Largest tolerated share of failed replicates per cell.
pub const MAX_FAILURE_RATE: f64 = 0.01;

fn default_beta() -> f64 {
    DEFAULT_BETA
}

fn default_window() -> WindowKind {
    WindowKind::Truncated
}

/// One estimator column. The truncation point is `floor(n^beta)` of the
/// series the estimator sees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorSpec {
    pub kind: EstimatorKind,
    #[serde(default)]
    pub bandwidth: BandwidthSpec,
    #[serde(default = "default_window")]
    pub window: WindowKind,
    #[serde(default = "default_beta")]
    pub beta: f64,
}

impl EstimatorSpec {
    pub fn gph() -> Self {
        Self {
            kind: EstimatorKind::Gph,
            bandwidth: BandwidthSpec::default(),
            window: WindowKind::Truncated,
            beta: DEFAULT_BETA,
        }
    }

    pub fn gphr(window: WindowKind) -> Self {
        Self {
            kind: EstimatorKind::Gphr,
            window,
            ..Self::gph()
        }
    }

    /// `GPH`, `GPHR`, `GPHR-P`, ...
    pub fn label(&self) -> String {
        match (self.kind, self.window) {
            (EstimatorKind::Gph, _) | (EstimatorKind::Gphr, WindowKind::Truncated) => {
                self.kind.to_string()
            }
            (EstimatorKind::Gphr, w) => format!("{}-{}", self.kind, w.tag()),
        }
    }

    fn window_for(&self, n: usize) -> Result<WindowSpec> {
        WindowSpec::from_beta(self.window, n, self.beta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    /// Model of the simulated series; in differencing mode, the model of the
    /// first difference.
    pub arfima: ArfimaSpec,
    /// Length of the observed (undifferenced) series.
    pub n: usize,
    pub replicates: usize,
    #[serde(default)]
    pub outliers: Option<OutlierSpec>,
    pub estimators: Vec<EstimatorSpec>,
    /// Integrate the simulated path, contaminate it, difference it again and
    /// report `d_hat + 1`.
    #[serde(default)]
    pub differencing: bool,
    pub master_seed: u64,
    /// Row prefix in reports; derived from `d` and `n` when absent.
    #[serde(default)]
    pub cell_id: Option<String>,
}

impl McConfig {
    /// The memory parameter the estimates target.
    pub fn true_d(&self) -> f64 {
        if self.differencing {
            self.arfima.d + 1.0
        } else {
            self.arfima.d
        }
    }

    pub fn cell_id(&self) -> String {
        self.cell_id
            .clone()
            .unwrap_or_else(|| format!("d={};n={}", self.true_d(), self.n))
    }

    fn contaminated(&self) -> bool {
        self.outliers.as_ref().is_some_and(|o| !o.is_empty())
    }

    /// Length of the series the estimators see.
    fn analysed_len(&self) -> usize {
        if self.differencing {
            self.n.saturating_sub(1)
        } else {
            self.n
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.arfima.validate()?;
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be >= 1".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidConfig("no estimators configured".into()));
        }
        let len = self.analysed_len();
        if len < 8 {
            return Err(Error::InsufficientData { needed: 8, got: len });
        }
        for e in &self.estimators {
            e.bandwidth.resolve(len)?;
            if e.kind == EstimatorKind::Gphr {
                let w = e.window_for(len)?;
                if w.m + 2 > len {
                    return Err(Error::Truncation { m: w.m, n: len });
                }
            }
        }
        Ok(())
    }
}

/// Outcome of one estimator on one replicate.
type Draw = std::result::Result<(f64, usize), Error>;

fn estimate_all(config: &McConfig, observed: &TimeSeries) -> Vec<Draw> {
    let series = if config.differencing {
        match difference(observed) {
            Ok(w) => w,
            Err(e) => return vec![Err(e); config.estimators.len()],
        }
    } else {
        observed.clone()
    };
    let n = series.len();
    let shift = if config.differencing { 1.0 } else { 0.0 };
    let windows: Vec<Option<WindowSpec>> = config
        .estimators
        .iter()
        .map(|e| match e.kind {
            EstimatorKind::Gphr => e.window_for(n).ok(),
            EstimatorKind::Gph => None,
        })
        .collect();
    // One robust autocovariance curve serves every window.
    let max_lag = windows.iter().flatten().map(|w| w.m).max();
    let curve = max_lag.map(|m| acvf_curve(&series, m, AcvfMethod::Robust, &QnConfig::default()));

    config
        .estimators
        .iter()
        .zip(&windows)
        .map(|(e, w)| {
            let est = match e.kind {
                EstimatorKind::Gph => gph(&series, e.bandwidth),
                EstimatorKind::Gphr => match (&curve, w) {
                    (Some(Ok(c)), Some(w)) => gph_robust_from_acvf(c, n, e.bandwidth, w),
                    (Some(Err(err)), _) => Err(err.clone()),
                    _ => Err(Error::InvalidConfig("invalid lag window".into())),
                },
            }?;
            Ok((est.d_hat + shift, est.dropped_frequencies))
        })
        .collect()
}

/// Draws of one replicate: clean estimators first, then contaminated.
fn run_replicate(config: &McConfig, r: usize) -> Vec<Draw> {
    let rep = replicate_seed(config.master_seed, r as u64);
    let sim_seed = stream_seed(rep, Stream::Simulation);
    let base = if config.differencing {
        simulate_arfima(&config.arfima, config.n - 1, sim_seed).and_then(|w| integrate(&w, 0.0))
    } else {
        simulate_arfima(&config.arfima, config.n, sim_seed)
    };
    let variants = if config.contaminated() { 2 } else { 1 };
    let base = match base {
        Ok(b) => b,
        Err(e) => return vec![Err(e); variants * config.estimators.len()],
    };
    let mut draws = estimate_all(config, &base);
    if let Some(outliers) = config.outliers.as_ref().filter(|_| config.contaminated()) {
        let z = contaminate(&base, outliers, stream_seed(rep, Stream::Contamination));
        draws.extend(estimate_all(config, &z.into_series()));
    }
    draws
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

fn aggregate(
    cell_id: &str,
    label: String,
    contaminated: bool,
    true_d: f64,
    draws: &[&Draw],
) -> Result<McCell> {
    let total = draws.len();
    let ok: Vec<(f64, usize)> = draws.iter().filter_map(|d| d.as_ref().ok().copied()).collect();
    let failures = total - ok.len();
    if failures as f64 > MAX_FAILURE_RATE * total as f64 || ok.is_empty() {
        let first = draws
            .iter()
            .find_map(|d| d.as_ref().err())
            .map(|e| e.to_string())
            .unwrap_or_default();
        return Err(Error::TooManyFailures {
            cell: format!("{cell_id}/{label}"),
            failures,
            replicates: total,
            first,
        });
    }
    let r = ok.len() as f64;
    let mut sum = CompensatedSum::default();
    let mut dropped = CompensatedSum::default();
    let mut with_drops = 0usize;
    for &(d, k) in &ok {
        sum.add(d);
        dropped.add(k as f64);
        if k > 0 {
            with_drops += 1;
        }
    }
    let mean = sum.value() / r;
    let mut centred = CompensatedSum::default();
    let mut squared_error = CompensatedSum::default();
    for &(d, _) in &ok {
        centred.add((d - mean).powi(2));
        squared_error.add((d - true_d).powi(2));
    }
    let sd_defined = ok.len() > 1;
    let sd = if sd_defined {
        (centred.value() / (r - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(McCell {
        cell_id: cell_id.to_string(),
        estimator: label,
        contaminated,
        true_d,
        mean,
        sd,
        sd_defined,
        bias: mean - true_d,
        mse: squared_error.value() / r,
        replicates: ok.len(),
        failures,
        mean_dropped_frequencies: dropped.value() / r,
        replicates_with_drops: with_drops,
    })
}

/// Runs the study and aggregates one cell per estimator and contamination
/// state, ordered estimator by estimator with the clean cell first.
pub fn run_monte_carlo(config: &McConfig) -> Result<McReport> {
    config.validate()?;
    let per_replicate: Vec<Vec<Draw>> = (0..config.replicates)
        .into_par_iter()
        .map(|r| run_replicate(config, r))
        .collect();

    let k = config.estimators.len();
    let variants = if config.contaminated() { 2 } else { 1 };
    let cell_id = config.cell_id();
    let mut cells = Vec::with_capacity(k * variants);
    for (i, e) in config.estimators.iter().enumerate() {
        for v in 0..variants {
            let column: Vec<&Draw> = per_replicate.iter().map(|d| &d[v * k + i]).collect();
            let contaminated = v == 1;
            let label = if contaminated {
                format!("{}_c", e.label())
            } else {
                e.label()
            };
            cells.push(aggregate(&cell_id, label, contaminated, config.true_d(), &column)?);
        }
    }
    Ok(McReport {
        master_seed: config.master_seed,
        paired: config.contaminated(),
        cells,
    })
}
