//! Additive-outlier contamination `z_t = x_t + sum_j w_j Y_{j,t}` where each
//! `Y_{j,t}` is independently `+1` or `-1` with probability `p_j / 2` each and
//! `0` otherwise.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{arfima_spectral_density, AcvfSequence, ArfimaSpec, TimeSeries};

/// One outlier type: magnitude `w_j` fired with probability `p_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutlierType {
    pub magnitude: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OutlierSpec {
    pub entries: Vec<OutlierType>,
}

impl OutlierSpec {
    pub fn new(entries: Vec<OutlierType>) -> Result<Self> {
        for (j, e) in entries.iter().enumerate() {
            if !e.magnitude.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "outlier type {j}: magnitude must be finite"
                )));
            }
            if !(0.0..=1.0).contains(&e.probability) {
                return Err(Error::InvalidSpec(format!(
                    "outlier type {j}: probability {} outside [0, 1]",
                    e.probability
                )));
            }
        }
        Ok(Self { entries })
    }

    /// A single outlier type.
    pub fn single(magnitude: f64, probability: f64) -> Result<Self> {
        Self::new(vec![OutlierType {
            magnitude,
            probability,
        }])
    }

    /// `sum_j w_j^2 p_j`, the variance the outliers add at lag zero.
    pub fn added_variance(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.magnitude * e.magnitude * e.probability)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A shock applied at `index` by outlier type `kind` with `sign` = +1 or -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutlierHit {
    pub index: usize,
    pub kind: usize,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContaminatedSeries {
    values: Vec<f64>,
    hits: Vec<OutlierHit>,
}

impl ContaminatedSeries {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Shocks in index order, then type order.
    pub fn hits(&self) -> &[OutlierHit] {
        &self.hits
    }

    pub fn series(&self) -> TimeSeries {
        TimeSeries::new(self.values.clone()).expect("contamination keeps values finite")
    }

    pub fn into_series(self) -> TimeSeries {
        TimeSeries::new(self.values).expect("contamination keeps values finite")
    }
}

/// Adds independent outlier shocks to every observation.
pub fn contaminate(series: &TimeSeries, spec: &OutlierSpec, seed: u64) -> ContaminatedSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(series.len());
    let mut hits = Vec::new();
    for (t, &x) in series.values().iter().enumerate() {
        let mut z = x;
        for (kind, e) in spec.entries.iter().enumerate() {
            let u: f64 = rng.random();
            let sign = if u < e.probability / 2.0 {
                1
            } else if u < e.probability {
                -1
            } else {
                continue;
            };
            z += f64::from(sign) * e.magnitude;
            hits.push(OutlierHit {
                index: t,
                kind,
                sign,
            });
        }
        values.push(z);
    }
    ContaminatedSeries { values, hits }
}

/// Autocovariance of the contaminated process: outliers only raise lag zero,
/// by `sum_j w_j^2 p_j`.
pub fn contaminated_acvf(base: &AcvfSequence, spec: &OutlierSpec) -> AcvfSequence {
    let mut gamma = base.gamma.clone();
    if let Some(g0) = gamma.first_mut() {
        *g0 += spec.added_variance();
    }
    AcvfSequence {
        gamma,
        source: base.source,
    }
}

/// Spectral density of the contaminated process: a flat uplift of
/// `sum_j w_j^2 p_j / (2 pi)`.
pub fn contaminated_spectrum(spec: &ArfimaSpec, outliers: &OutlierSpec, omega: f64) -> Result<f64> {
    Ok(arfima_spectral_density(spec, omega)? + outliers.added_variance() / (2.0 * PI))
}
