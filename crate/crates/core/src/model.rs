//! ARFIMA(p, d, q) processes: theoretical autocovariances, spectral density,
//! exact Gaussian simulation and integer (de)differencing.
//!
//! The model is `Phi(B) (1 - B)^d (X_t - mu) = Theta(B) eps_t` with
//! `Phi(z) = 1 - sum phi_j z^j` and `Theta(z) = 1 - sum theta_i z^i`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Number of MA(inf) weights kept for the ARMA factor of the autocovariance.
pub const PSI_TRUNCATION: usize = 512;
/// Maximum absolute tail mass of the discarded MA(inf) weights.
pub const PSI_TAIL_TOLERANCE: f64 = 1e-10;

/// Reciprocal roots closer to the unit circle than this count as unit roots.
const ROOT_MARGIN: f64 = 1e-10;

/// Parameters of an ARFIMA(p, d, q) process. `p` and `q` are the lengths of
/// `phi` and `theta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArfimaSpec {
    pub d: f64,
    #[serde(default)]
    pub phi: Vec<f64>,
    #[serde(default)]
    pub theta: Vec<f64>,
    #[serde(default = "default_sigma2")]
    pub sigma2: f64,
    #[serde(default)]
    pub mu: f64,
}

fn default_sigma2() -> f64 {
    1.0
}

impl ArfimaSpec {
    pub fn new(d: f64, phi: Vec<f64>, theta: Vec<f64>, sigma2: f64) -> Self {
        Self {
            d,
            phi,
            theta,
            sigma2,
            mu: 0.0,
        }
    }

    /// ARFIMA(0, d, 0) with unit innovation variance.
    pub fn fractional_noise(d: f64) -> Self {
        Self::new(d, Vec::new(), Vec::new(), 1.0)
    }

    pub fn with_mean(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn p(&self) -> usize {
        self.phi.len()
    }

    pub fn q(&self) -> usize {
        self.theta.len()
    }

    /// Checks finiteness, `sigma2 > 0` and that every root of `Phi` and
    /// `Theta` lies strictly outside the unit circle. `d` is not range-checked.
    pub fn validate_arma(&self) -> Result<()> {
        if !self.d.is_finite() {
            return Err(Error::InvalidSpec(format!("d must be finite, got {}", self.d)));
        }
        if !(self.sigma2.is_finite() && self.sigma2 > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "innovation variance must be positive, got {}",
                self.sigma2
            )));
        }
        if !self.mu.is_finite() {
            return Err(Error::InvalidSpec(format!("mean must be finite, got {}", self.mu)));
        }
        if let Some(c) = self.phi.iter().chain(&self.theta).find(|c| !c.is_finite()) {
            return Err(Error::InvalidSpec(format!("non-finite ARMA coefficient {c}")));
        }
        check_roots("AR", &self.phi)?;
        check_roots("MA", &self.theta)?;
        Ok(())
    }

    /// Full validation for stationary use: ARMA checks plus `-0.5 < d < 0.5`.
    pub fn validate(&self) -> Result<()> {
        self.validate_arma()?;
        if !(self.d > -0.5 && self.d < 0.5) {
            return Err(Error::MemoryOutOfRange(self.d));
        }
        Ok(())
    }
}

/// Roots of `1 - sum c_j z^j` must have modulus > 1, i.e. the eigenvalues of
/// the companion matrix (the reciprocal roots) must lie inside the unit disc.
fn check_roots(polynomial: &'static str, coeffs: &[f64]) -> Result<()> {
    let degree = match coeffs.iter().rposition(|&c| c != 0.0) {
        Some(last) => last + 1,
        None => return Ok(()),
    };
    let companion = DMatrix::from_fn(degree, degree, |r, c| {
        if r == 0 {
            coeffs[c]
        } else if r == c + 1 {
            1.0
        } else {
            0.0
        }
    });
    for lambda in companion.complex_eigenvalues().iter() {
        if lambda.norm() >= 1.0 - ROOT_MARGIN {
            let root = lambda.inv();
            return Err(Error::NonStationary {
                polynomial,
                re: root.re,
                im: root.im,
                modulus: root.norm(),
            });
        }
    }
    Ok(())
}

/// Observed series `x_1..x_n`, with the seed that produced it when simulated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { values, seed: None })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Affine image `a * x + b`, used by the invariance tests and the CLI.
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&x| a * x + b).collect())
    }
}

/// Which estimator produced an autocovariance sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AcvfSource {
    Theoretical,
    ClassicalSample,
    RobustQ,
}

/// Autocovariances at lags `0..=H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcvfSequence {
    pub gamma: Vec<f64>,
    pub source: AcvfSource,
}

impl AcvfSequence {
    pub fn max_lag(&self) -> usize {
        self.gamma.len().saturating_sub(1)
    }

    /// Autocorrelations `gamma(h) / gamma(0)`.
    pub fn acf(&self) -> Vec<f64> {
        let g0 = self.gamma[0];
        self.gamma.iter().map(|g| g / g0).collect()
    }
}

/// Autocovariance of ARFIMA(0, d, 0) with innovation variance `sigma2` at
/// lags `0..=max_lag`, by the ratio recursion from the log-Gamma form of
/// `gamma(0)`.
pub fn fractional_noise_acvf(d: f64, sigma2: f64, max_lag: usize) -> Vec<f64> {
    let mut gamma = Vec::with_capacity(max_lag + 1);
    let g0 = sigma2 * (ln_gamma(1.0 - 2.0 * d) - 2.0 * ln_gamma(1.0 - d)).exp();
    gamma.push(g0);
    for h in 1..=max_lag {
        let hf = h as f64;
        let prev = gamma[h - 1];
        gamma.push(prev * (hf - 1.0 + d) / (hf - d));
    }
    gamma
}

/// MA(inf) weights of `Theta(B) / Phi(B)`.
fn psi_weights(phi: &[f64], theta: &[f64], count: usize) -> Vec<f64> {
    let mut psi = vec![0.0; count];
    psi[0] = 1.0;
    for k in 1..count {
        let mut value = if k <= theta.len() { -theta[k - 1] } else { 0.0 };
        for (j, &ph) in phi.iter().enumerate().take(k) {
            value += ph * psi[k - 1 - j];
        }
        psi[k] = value;
    }
    psi
}

/// Theoretical autocovariance of a stationary ARFIMA(p, d, q) at lags
/// `0..=max_lag`.
pub fn arfima_acvf(spec: &ArfimaSpec, max_lag: usize) -> Result<AcvfSequence> {
    spec.validate()?;
    if spec.p() == 0 && spec.q() == 0 {
        return Ok(AcvfSequence {
            gamma: fractional_noise_acvf(spec.d, spec.sigma2, max_lag),
            source: AcvfSource::Theoretical,
        });
    }

    let psi = psi_weights(&spec.phi, &spec.theta, 2 * PSI_TRUNCATION);
    let tail: f64 = psi[PSI_TRUNCATION..].iter().map(|p| p.abs()).sum();
    if tail >= PSI_TAIL_TOLERANCE {
        return Err(Error::InvalidSpec(format!(
            "ARMA part too persistent: MA(inf) tail mass {tail:.3e} beyond {PSI_TRUNCATION} terms"
        )));
    }
    let psi = &psi[..PSI_TRUNCATION];
    let k = psi.len();
    // c(m) = sum_k psi_k psi_{k+m}
    let cross: Vec<f64> = (0..k)
        .map(|m| psi[..k - m].iter().zip(&psi[m..]).map(|(a, b)| a * b).sum())
        .collect();
    let core = fractional_noise_acvf(spec.d, spec.sigma2, max_lag + k);
    let gamma = (0..=max_lag)
        .map(|h| {
            let mut acc = cross[0] * core[h];
            for (m, &c) in cross.iter().enumerate().skip(1) {
                acc += c * (core[h + m] + core[h.abs_diff(m)]);
            }
            acc
        })
        .collect();
    Ok(AcvfSequence {
        gamma,
        source: AcvfSource::Theoretical,
    })
}

/// `|P(e^{-i w})|^2` for `P(z) = 1 - sum c_j z^j`.
fn transfer_gain(coeffs: &[f64], omega: f64) -> f64 {
    let (mut re, mut im) = (1.0, 0.0);
    for (j, &c) in coeffs.iter().enumerate() {
        let angle = omega * (j + 1) as f64;
        re -= c * angle.cos();
        im += c * angle.sin();
    }
    re * re + im * im
}

/// Spectral density `f_X(w)` for `|w| <= pi`; `f` is even in `w`.
pub fn arfima_spectral_density(spec: &ArfimaSpec, omega: f64) -> Result<f64> {
    spec.validate()?;
    let w = omega.abs();
    if !(w <= PI * (1.0 + 1e-12)) {
        return Err(Error::FrequencyOutOfRange(omega));
    }
    if w == 0.0 && spec.d > 0.0 {
        return Err(Error::Pole(spec.d));
    }
    let arma = transfer_gain(&spec.theta, w) / transfer_gain(&spec.phi, w);
    let fractional = (2.0 * (w / 2.0).sin()).powf(-2.0 * spec.d);
    Ok(spec.sigma2 / (2.0 * PI) * arma * fractional)
}

/// Exact Gaussian sample from an autocovariance sequence by Durbin-Levinson
/// conditional sampling. `gamma` must cover lags `0..n`.
pub(crate) fn durbin_levinson_sample(gamma: &[f64], n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut x = Vec::with_capacity(n);
    let mut coeffs: Vec<f64> = Vec::with_capacity(n);
    let mut scratch: Vec<f64> = Vec::with_capacity(n);
    let mut variance = gamma[0];
    let z: f64 = StandardNormal.sample(rng);
    x.push(variance.sqrt() * z);
    for t in 1..n {
        let mut num = gamma[t];
        for (j, c) in coeffs.iter().enumerate() {
            num -= c * gamma[t - 1 - j];
        }
        let reflection = num / variance;
        scratch.clear();
        scratch.extend(
            coeffs
                .iter()
                .zip(coeffs.iter().rev())
                .map(|(a, b)| a - reflection * b),
        );
        scratch.push(reflection);
        std::mem::swap(&mut coeffs, &mut scratch);
        variance *= 1.0 - reflection * reflection;

        let mean: f64 = coeffs.iter().zip(x.iter().rev()).map(|(c, v)| c * v).sum();
        let z: f64 = StandardNormal.sample(rng);
        x.push(mean + variance.max(0.0).sqrt() * z);
    }
    x
}

/// Burn-in discarded after the ARMA recursion.
pub fn arma_burn_in(spec: &ArfimaSpec) -> usize {
    500.max(20 * (spec.p() + spec.q()))
}

/// Simulates `n` observations of a stationary Gaussian ARFIMA process.
///
/// Fractional noise is drawn exactly by Durbin-Levinson conditional sampling.
/// When `p + q > 0` the fractional noise is passed through the ARMA recursion
/// and the first [`arma_burn_in`] values are discarded.
pub fn simulate_arfima(spec: &ArfimaSpec, n: usize, seed: u64) -> Result<TimeSeries> {
    spec.validate()?;
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = if spec.p() == 0 && spec.q() == 0 {
        let gamma = fractional_noise_acvf(spec.d, spec.sigma2, n - 1);
        durbin_levinson_sample(&gamma, n, &mut rng)
    } else {
        let burn = arma_burn_in(spec);
        let total = n + burn;
        let gamma = fractional_noise_acvf(spec.d, spec.sigma2, total - 1);
        let noise = durbin_levinson_sample(&gamma, total, &mut rng);
        let mut out = vec![0.0; total];
        for t in 0..total {
            let mut value = noise[t];
            for (j, &ph) in spec.phi.iter().enumerate() {
                if t > j {
                    value += ph * out[t - 1 - j];
                }
            }
            for (i, &th) in spec.theta.iter().enumerate() {
                if t > i {
                    value -= th * noise[t - 1 - i];
                }
            }
            out[t] = value;
        }
        out.split_off(burn)
    };
    let values = values.into_iter().map(|v| v + spec.mu).collect();
    Ok(TimeSeries::new(values)?.with_seed(seed))
}

/// First difference `w_t = x_{t+1} - x_t` (length `n - 1`).
pub fn difference(series: &TimeSeries) -> Result<TimeSeries> {
    let x = series.values();
    if x.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: x.len(),
        });
    }
    TimeSeries::new(x.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Cumulative sums `initial, initial + x_1, ..., initial + x_1 + ... + x_n`
/// (length `n + 1`), so that `difference(integrate(x, c))` returns `x`.
pub fn integrate(series: &TimeSeries, initial: f64) -> Result<TimeSeries> {
    let mut out = Vec::with_capacity(series.len() + 1);
    let mut level = initial;
    out.push(level);
    for &x in series.values() {
        level += x;
        out.push(level);
    }
    TimeSeries::new(out)
}
