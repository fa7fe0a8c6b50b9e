//! Robust estimation of the memory parameter `d` of ARFIMA time series in
//! the presence of additive outliers.
//!
//! The pipeline: simulate or load a series ([`model`]), optionally inject
//! additive outliers ([`contamination`]), estimate autocovariances
//! classically or through the `Qn` scale ([`qn`], [`acvf`]), turn them into
//! spectral estimates ([`spectral`]) and regress log spectral ordinates on
//! `log(4 sin^2(w / 2))` to estimate `d` ([`estimators`]). The
//! [`experiments`] module runs seeded Monte Carlo studies of the estimators.

pub mod acvf;
pub mod contamination;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod model;
pub mod qn;
pub mod quadrature;
pub mod seed;
pub mod spectral;

pub use error::{Error, Result};
pub use model::{ArfimaSpec, AcvfSequence, AcvfSource, TimeSeries};
pub use qn::QnConfig;
