//! Limits of the normalized periodogram `I(w_j) / f(w_j)` at a fixed Fourier
//! index `j` for a long-memory process:
//!
//! `L_j(d)  = (2 / pi) int sin^2(w/2) / (a - w)^2 |w / a|^{-2d} dw`,
//! `L*_j(d) = (1 / pi) int sin^2(w/2) / ((a - w)(a + w)) |w / a|^{-2d} dw`,
//!
//! with `a = 2 pi j` and the integrals over the whole real line. The
//! normalized periodogram is asymptotically `(a1 / 2) chi2_1 + (a2 / 2) chi2_1`
//! with `a1 = L - 2 L*` and `a2 = L + 2 L*`.
//!
//! The integrands are bounded (the `|w|^{-2d}` pole is cancelled by
//! `sin^2(w/2) ~ w^2 / 4`), so `[-B, B]` is integrated panel by panel between
//! multiples of `2 pi`. Beyond `B` both sides are folded into one function
//! `G(w) = F(w) + F(-w)` without the `sin^2` factor, and
//! `sin^2(w/2) = (1 - cos w) / 2` splits the tail into a smooth mean part and
//! an oscillatory part. The mean part is integrated on a logarithmic scale up
//! to `OMEGA_FACTOR * B` and closed with its asymptotic expansion; the
//! oscillatory part is taken from one integration by parts, which is exact up
//! to `O(|G'(B)|)` because `B` is chosen with `cos B = 0`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Absolute tolerance on each returned value.
pub const TOLERANCE: f64 = 1e-6;

const OMEGA_FACTOR: f64 = 1e4;
const MAX_PANELS: usize = 200;

#[derive(Clone, Copy)]
enum Kernel {
    /// `1 / (a - w)^2`
    Squared,
    /// `1 / ((a - w)(a + w))`
    Product,
}

impl Kernel {
    fn prefactor(self) -> f64 {
        match self {
            Kernel::Squared => 2.0 / PI,
            Kernel::Product => 1.0 / PI,
        }
    }

    /// Leading coefficient and second-order ratio of `G` at infinity:
    /// `G(w) ~ kappa a^{2d} w^{-2-2d} (1 + r2 a^2 / w^2)`.
    fn tail_expansion(self) -> (f64, f64) {
        match self {
            Kernel::Squared => (2.0, 3.0),
            Kernel::Product => (-2.0, 1.0),
        }
    }
}

/// `sin^2(x / 2)` with the argument reduced to `[-pi, pi]`.
fn half_sine_squared(x: f64) -> f64 {
    let r = x - 2.0 * PI * (x / (2.0 * PI)).round();
    let s = (0.5 * r).sin();
    s * s
}

/// `sin^2(x / 2) / x^2`, continuous at zero.
fn sinc_squared(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        0.25 * (1.0 - x * x / 12.0)
    } else {
        half_sine_squared(x) / (x * x)
    }
}

/// `sin^2(x / 2) / x`, continuous at zero.
fn sinc_half(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        0.25 * x
    } else {
        half_sine_squared(x) / x
    }
}

fn memory_factor(w: f64, a: f64, d: f64) -> f64 {
    (w.abs() / a).powf(-2.0 * d)
}

/// The full integrand `F(w)`.
fn integrand(kernel: Kernel, w: f64, a: f64, d: f64) -> f64 {
    if w == 0.0 {
        return 0.0;
    }
    // sin^2(w/2) = sin^2((w -+ a)/2) because a is a multiple of 2 pi.
    let core = match kernel {
        Kernel::Squared => sinc_squared(w - a),
        Kernel::Product => {
            if (w - a).abs() <= (w + a).abs() {
                -sinc_half(w - a) / (a + w)
            } else {
                sinc_half(w + a) / (a - w)
            }
        }
    };
    core * memory_factor(w, a, d)
}

/// `G(w) = (F(w) + F(-w)) / sin^2(w/2)` for `w > a`.
fn folded(kernel: Kernel, w: f64, a: f64, d: f64) -> f64 {
    let m = memory_factor(w, a, d);
    match kernel {
        Kernel::Squared => m * ((w - a).powi(-2) + (w + a).powi(-2)),
        Kernel::Product => 2.0 * m / (a * a - w * w),
    }
}

fn validate(j: usize, d: f64) -> Result<()> {
    if j == 0 {
        return Err(Error::InvalidConfig("Fourier index j must be >= 1".into()));
    }
    if !(d > -0.5 && d < 0.5) {
        return Err(Error::MemoryOutOfRange(d));
    }
    Ok(())
}

fn normalized_limit(kernel: Kernel, j: usize, d: f64) -> Result<f64> {
    validate(j, d)?;
    let a = 2.0 * PI * j as f64;

    // B = (2K + 1/2) pi: cos B = 0, sin B = 1.
    let half_periods = ((1000.0f64).max(50.0 * a) / (2.0 * PI)).ceil();
    let b = (2.0 * half_periods + 0.5) * PI;
    let full_panels = half_periods as i64;

    let panel_tol = 0.4 * TOLERANCE / (2 * full_panels + 2) as f64;
    let mut value = 0.0;
    let mut error = 0.0;
    let f = |w: f64| integrand(kernel, w, a, d);
    let mut add = |lo: f64, hi: f64| -> Result<()> {
        let r = integrate(f, lo, hi, panel_tol, MAX_PANELS)?;
        value += r.value;
        error += r.error;
        Ok(())
    };
    for k in -full_panels..full_panels {
        add(2.0 * PI * k as f64, 2.0 * PI * (k + 1) as f64)?;
    }
    let edge = 2.0 * PI * full_panels as f64;
    add(-b, -edge)?;
    add(edge, b)?;

    // Mean part of the tail on w = B e^s.
    let omega = OMEGA_FACTOR * b;
    let g = |w: f64| folded(kernel, w, a, d);
    let mean = integrate(
        |s: f64| {
            let w = b * s.exp();
            g(w) * w
        },
        0.0,
        OMEGA_FACTOR.ln(),
        0.2 * TOLERANCE,
        MAX_PANELS,
    )?;
    let (kappa, r2) = kernel.tail_expansion();
    let scale = kappa * a.powf(2.0 * d);
    let remainder = scale
        * (omega.powf(-1.0 - 2.0 * d) / (1.0 + 2.0 * d)
            + r2 * a * a * omega.powf(-3.0 - 2.0 * d) / (3.0 + 2.0 * d));
    let remainder_error = (scale * a.powi(4) * omega.powf(-5.0 - 2.0 * d)).abs() * 10.0;

    // int_B^inf cos(w) G(w) dw = -sin(B) G(B) + O(|G'(B)|).
    let oscillatory = -g(b);
    let h = 1e-3 * b;
    let oscillatory_error = ((g(b + h) - g(b - h)) / (2.0 * h)).abs();

    let total = value + 0.5 * (mean.value + remainder) - 0.5 * oscillatory;
    let total_error =
        error + 0.5 * (mean.error + remainder_error) + 0.5 * oscillatory_error;
    let achieved = kernel.prefactor() * total_error;
    if !(achieved <= TOLERANCE) || !total.is_finite() {
        return Err(Error::Quadrature {
            achieved,
            requested: TOLERANCE,
        });
    }
    Ok(kernel.prefactor() * total)
}

/// `L_j(d)`, the limiting mean of `I(w_j) / f(w_j)`.
pub fn hurvich_beltrao_l(j: usize, d: f64) -> Result<f64> {
    normalized_limit(Kernel::Squared, j, d)
}

/// `L*_j(d)`.
pub fn hurvich_beltrao_lstar(j: usize, d: f64) -> Result<f64> {
    normalized_limit(Kernel::Product, j, d)
}

/// `(a1, a2) = (L - 2 L*, L + 2 L*)`.
pub fn quadratic_form_weights(j: usize, d: f64) -> Result<(f64, f64)> {
    let l = hurvich_beltrao_l(j, d)?;
    let ls = hurvich_beltrao_lstar(j, d)?;
    Ok((l - 2.0 * ls, l + 2.0 * ls))
}
