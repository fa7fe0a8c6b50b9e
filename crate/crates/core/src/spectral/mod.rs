//! Periodogram, lag-window spectral estimates and the robust truncated
//! pseudo-periodogram
//! `I_Q(w) = (1 / 2 pi) [kappa(0) gamma_Q(0) + 2 sum_{h=1}^{M} kappa(h) gamma_Q(h) cos(h w)]`.

pub mod hurvich_beltrao;
pub mod window;

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::acvf::{acvf_curve, AcvfMethod};
use crate::error::{Error, Result};
use crate::model::{AcvfSequence, AcvfSource, TimeSeries};
use crate::qn::QnConfig;

pub use hurvich_beltrao::{hurvich_beltrao_l, hurvich_beltrao_lstar, quadratic_form_weights};
pub use window::{lag_window_weight, WindowKind, WindowSpec};

/// Fourier frequencies `w_j = 2 pi j / n` for `j = 1..=count`, where
/// `count <= floor(n / 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierGrid {
    n: usize,
    count: usize,
}

impl FourierGrid {
    /// The full grid `j = 1..=floor(n/2)`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InsufficientData { needed: 2, got: n });
        }
        Ok(Self { n, count: n / 2 })
    }

    /// The lowest `count` frequencies only.
    pub fn lowest(n: usize, count: usize) -> Result<Self> {
        let full = Self::new(n)?;
        if count == 0 || count > full.count {
            return Err(Error::Bandwidth {
                m: count,
                max: full.count,
            });
        }
        Ok(Self { n, count })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// `w_j` for 1-based `j`.
    pub fn omega(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n as f64
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (1..=self.count).map(|j| self.omega(j)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpectralMethod {
    /// Raw periodogram of the uncentered series.
    Periodogram,
    /// Cosine transform of windowed autocovariances.
    LagWindow {
        window: WindowSpec,
        acvf: AcvfSource,
    },
}

/// Spectral values at `grid` frequencies `j = 1..=grid.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub grid: FourierGrid,
    pub values: Vec<f64>,
    pub method: SpectralMethod,
    /// Ordinates `<= 0`; kept as computed.
    pub non_positive: usize,
}

impl SpectralEstimate {
    fn new(grid: FourierGrid, values: Vec<f64>, method: SpectralMethod) -> Self {
        let non_positive = values.iter().filter(|v| **v <= 0.0).count();
        Self {
            grid,
            values,
            method,
            non_positive,
        }
    }
}

/// All `n` periodogram ordinates `I(2 pi j / n)`, `j = 0..n`, of the
/// uncentered series.
pub fn full_periodogram(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut buffer: Vec<Complex<f64>> = values.iter().map(|&x| Complex::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buffer);
    let scale = 1.0 / (2.0 * PI * n as f64);
    buffer.iter().map(|c| c.norm_sqr() * scale).collect()
}

/// `I(w) = |sum_t x_t e^{i w t}|^2 / (2 pi n)` at the grid frequencies,
/// without mean correction.
pub fn periodogram(series: &TimeSeries, grid: &FourierGrid) -> Result<SpectralEstimate> {
    if grid.n() != series.len() {
        return Err(Error::InvalidConfig(format!(
            "grid built for n = {} applied to a series of length {}",
            grid.n(),
            series.len()
        )));
    }
    let full = full_periodogram(series.values());
    let values = full[1..=grid.len()].to_vec();
    Ok(SpectralEstimate::new(
        *grid,
        values,
        SpectralMethod::Periodogram,
    ))
}

/// Lag-window estimate from a precomputed autocovariance sequence, which must
/// reach lag `window.m`.
pub fn pseudo_periodogram_from_acvf(
    acvf: &AcvfSequence,
    window: &WindowSpec,
    grid: &FourierGrid,
) -> Result<SpectralEstimate> {
    if acvf.max_lag() < window.m || acvf.gamma.is_empty() {
        return Err(Error::Truncation {
            m: window.m,
            n: acvf.gamma.len(),
        });
    }
    let n = grid.n();
    let weighted: Vec<f64> = (0..=window.m)
        .map(|h| window.weight(h) * acvf.gamma[h])
        .collect();
    let values = (1..=grid.len())
        .map(|j| {
            let mut sum = 0.0;
            for (h, &g) in weighted.iter().enumerate().skip(1) {
                // cos(h w_j) with the argument reduced modulo n
                let phase = (h * j) % n;
                sum += g * (2.0 * PI * phase as f64 / n as f64).cos();
            }
            (weighted[0] + 2.0 * sum) / (2.0 * PI)
        })
        .collect();
    Ok(SpectralEstimate::new(
        *grid,
        values,
        SpectralMethod::LagWindow {
            window: *window,
            acvf: acvf.source,
        },
    ))
}

fn check_truncation(n: usize, window: &WindowSpec) -> Result<()> {
    if window.m + 2 > n {
        return Err(Error::Truncation { m: window.m, n });
    }
    Ok(())
}

/// Robust truncated pseudo-periodogram built on `Qn` autocovariances.
pub fn robust_pseudo_periodogram(
    series: &TimeSeries,
    window: &WindowSpec,
    config: &QnConfig,
    grid: &FourierGrid,
) -> Result<SpectralEstimate> {
    check_truncation(series.len(), window)?;
    let acvf = acvf_curve(series, window.m, AcvfMethod::Robust, config)?;
    pseudo_periodogram_from_acvf(&acvf, window, grid)
}

/// Classical lag-window estimate (sample autocovariances in place of `Qn`).
pub fn classical_lag_window_estimate(
    series: &TimeSeries,
    window: &WindowSpec,
    grid: &FourierGrid,
) -> Result<SpectralEstimate> {
    check_truncation(series.len(), window)?;
    let acvf = acvf_curve(series, window.m, AcvfMethod::Classical, &QnConfig::default())?;
    pseudo_periodogram_from_acvf(&acvf, window, grid)
}
