//! Classical and `Qn`-based autocovariance and autocorrelation estimators.
//!
//! The robust estimator applies `cov(X, Y) = (var(X + Y) - var(X - Y)) / 4`
//! with `Qn^2` standing in for the variance:
//! `gamma_Q(h) = (Qn^2(u + v) - Qn^2(u - v)) / 4`, where `u` and `v` hold the
//! first and last `n - h` observations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AcvfSequence, AcvfSource, TimeSeries};
use crate::qn::{qn_scale, QnConfig};

/// The overlapping windows `u = x[0..n-h]` and `v = x[h..n]`.
#[derive(Debug, Clone, Copy)]
pub struct LagVectors<'a> {
    pub u: &'a [f64],
    pub v: &'a [f64],
    pub lag: usize,
}

impl<'a> LagVectors<'a> {
    /// Requires `n - h >= 2`.
    pub fn new(values: &'a [f64], lag: usize) -> Result<Self> {
        let n = values.len();
        if lag + 2 > n {
            return Err(Error::LagOutOfRange { lag, n });
        }
        Ok(Self {
            u: &values[..n - lag],
            v: &values[lag..],
            lag,
        })
    }

    pub fn sum(&self) -> Vec<f64> {
        self.u.iter().zip(self.v).map(|(a, b)| a + b).collect()
    }

    pub fn difference(&self) -> Vec<f64> {
        self.u.iter().zip(self.v).map(|(a, b)| a - b).collect()
    }

    /// `(Qn(u + v), Qn(u - v))`.
    pub fn qn_pair(&self, config: &QnConfig) -> Result<(f64, f64)> {
        Ok((
            qn_scale(&self.sum(), config)?,
            qn_scale(&self.difference(), config)?,
        ))
    }
}

/// `(1/n) sum_{t=1}^{n-h} (x_t - xbar)(x_{t+h} - xbar)` for `0 <= h <= n - 2`.
pub fn sample_acvf(series: &TimeSeries, h: usize) -> Result<f64> {
    let x = series.values();
    let n = x.len();
    if h + 2 > n {
        return Err(Error::LagOutOfRange { lag: h, n });
    }
    let mean = series.mean();
    let sum: f64 = x[..n - h]
        .iter()
        .zip(&x[h..])
        .map(|(a, b)| (a - mean) * (b - mean))
        .sum();
    Ok(sum / n as f64)
}

/// Robust autocovariance `gamma_Q(h)`; may be negative.
pub fn robust_acvf(series: &TimeSeries, h: usize, config: &QnConfig) -> Result<f64> {
    let (plus, minus) = LagVectors::new(series.values(), h)?.qn_pair(config)?;
    Ok(0.25 * (plus * plus - minus * minus))
}

/// Robust autocorrelation, always in `[-1, 1]`.
pub fn robust_acf(series: &TimeSeries, h: usize, config: &QnConfig) -> Result<f64> {
    let (plus, minus) = LagVectors::new(series.values(), h)?.qn_pair(config)?;
    let (p2, m2) = (plus * plus, minus * minus);
    let denom = p2 + m2;
    if denom == 0.0 {
        return Err(Error::UndefinedCorrelation(h));
    }
    Ok((p2 - m2) / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AcvfMethod {
    Classical,
    Robust,
}

/// Autocovariances at lags `0..=max_lag` by the chosen estimator.
pub fn acvf_curve(
    series: &TimeSeries,
    max_lag: usize,
    method: AcvfMethod,
    config: &QnConfig,
) -> Result<AcvfSequence> {
    let gamma = (0..=max_lag)
        .map(|h| match method {
            AcvfMethod::Classical => sample_acvf(series, h),
            AcvfMethod::Robust => robust_acvf(series, h, config),
        })
        .collect::<Result<Vec<_>>>()?;
    let source = match method {
        AcvfMethod::Classical => AcvfSource::ClassicalSample,
        AcvfMethod::Robust => AcvfSource::RobustQ,
    };
    Ok(AcvfSequence { gamma, source })
}
