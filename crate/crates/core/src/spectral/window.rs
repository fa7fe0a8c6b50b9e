use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default exponent for the truncation point `M = floor(n^beta)`.
pub const DEFAULT_BETA: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    Truncated,
    Bartlett,
    Parzen,
    TukeyHamming,
}

impl WindowKind {
    pub const ALL: [WindowKind; 4] = [
        WindowKind::Truncated,
        WindowKind::Parzen,
        WindowKind::TukeyHamming,
        WindowKind::Bartlett,
    ];

    /// Short tag used in estimator labels.
    pub fn tag(self) -> &'static str {
        match self {
            WindowKind::Truncated => "",
            WindowKind::Bartlett => "B",
            WindowKind::Parzen => "P",
            WindowKind::TukeyHamming => "TH",
        }
    }
}

impl fmt::Display for WindowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WindowKind::Truncated => "truncated",
            WindowKind::Bartlett => "bartlett",
            WindowKind::Parzen => "parzen",
            WindowKind::TukeyHamming => "tukey-hamming",
        })
    }
}

impl FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "truncated" | "t" => Ok(WindowKind::Truncated),
            "bartlett" | "b" => Ok(WindowKind::Bartlett),
            "parzen" | "p" => Ok(WindowKind::Parzen),
            "tukey-hamming" | "tukey_hamming" | "th" => Ok(WindowKind::TukeyHamming),
            other => Err(Error::InvalidConfig(format!("unknown lag window `{other}`"))),
        }
    }
}

/// `floor(n^e)` with a small guard so exact powers are not floored down.
pub fn floor_power(n: usize, exponent: f64) -> usize {
    ((n as f64).powf(exponent) + 1e-9).floor() as usize
}

/// A lag window with truncation point `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub kind: WindowKind,
    pub m: usize,
}

impl WindowSpec {
    pub fn new(kind: WindowKind, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidConfig("truncation point M must be >= 1".into()));
        }
        Ok(Self { kind, m })
    }

    /// `M = floor(n^beta)`, `0 < beta < 1`.
    pub fn from_beta(kind: WindowKind, n: usize, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::InvalidConfig(format!("beta = {beta} outside (0, 1)")));
        }
        Self::new(kind, floor_power(n, beta).max(1))
    }

    /// Heuristic truncation from the temporal breakdown point of the robust
    /// autocovariance. Using the lower bound `(n - h) / (4 n)` for the
    /// temporal breakdown point at lag `h`, the largest lag that still
    /// tolerates `suspected_outliers` arbitrary values is
    /// `min{h : (n - h) / (4 n) <= k / n} - 1 = n - 4k - 1`, clamped to
    /// `[1, n - 2]`.
    pub fn breakdown_bound(kind: WindowKind, n: usize, suspected_outliers: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InsufficientData { needed: 3, got: n });
        }
        let first_broken = n.saturating_sub(4 * suspected_outliers).max(1);
        let m = first_broken.saturating_sub(1).clamp(1, n - 2);
        Self::new(kind, m)
    }

    /// Weight `kappa(h)`; zero beyond `M`.
    pub fn weight(&self, h: usize) -> f64 {
        if h > self.m {
            return 0.0;
        }
        let u = h as f64 / self.m as f64;
        match self.kind {
            WindowKind::Truncated => 1.0,
            WindowKind::Bartlett => 1.0 - u,
            WindowKind::TukeyHamming => 0.54 + 0.46 * (std::f64::consts::PI * u).cos(),
            WindowKind::Parzen => {
                if 2 * h <= self.m {
                    1.0 - 6.0 * u * u + 6.0 * u * u * u
                } else {
                    2.0 * (1.0 - u).powi(3)
                }
            }
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..=self.m).map(|h| self.weight(h)).collect()
    }
}

/// Free-function form of [`WindowSpec::weight`].
pub fn lag_window_weight(spec: &WindowSpec, h: usize) -> f64 {
    spec.weight(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_window_values() {
        let m = 10;
        let t = WindowSpec::new(WindowKind::Truncated, m).unwrap();
        assert_eq!(t.weight(m), 1.0);
        assert_eq!(t.weight(m + 1), 0.0);
        let b = WindowSpec::new(WindowKind::Bartlett, m).unwrap();
        assert_eq!(b.weight(m), 0.0);
        assert_eq!(b.weight(5), 0.5);
        let p = WindowSpec::new(WindowKind::Parzen, m).unwrap();
        assert_eq!(p.weight(0), 1.0);
        assert!((p.weight(5) - 0.25).abs() < 1e-15);
        assert_eq!(p.weight(m), 0.0);
        let th = WindowSpec::new(WindowKind::TukeyHamming, m).unwrap();
        assert_eq!(th.weight(0), 1.0);
        assert!((th.weight(m) - 0.08).abs() < 1e-15);
    }

    #[test]
    fn weights_are_in_unit_interval_and_vanish_past_m() {
        for kind in WindowKind::ALL {
            for m in [1, 2, 7, 54, 107] {
                let w = WindowSpec::new(kind, m).unwrap();
                assert_eq!(w.weight(0), 1.0);
                for h in 0..=m + 3 {
                    let k = w.weight(h);
                    assert!((0.0..=1.0).contains(&k), "{kind} m={m} h={h}: {k}");
                    if h > m {
                        assert_eq!(k, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn parzen_is_continuous_at_half() {
        let w = WindowSpec::new(WindowKind::Parzen, 1000).unwrap();
        assert!((w.weight(500) - w.weight(501)).abs() < 1e-2);
    }

    #[test]
    fn truncation_rules() {
        assert_eq!(WindowSpec::from_beta(WindowKind::Truncated, 300, 0.7).unwrap().m, 54);
        assert_eq!(WindowSpec::from_beta(WindowKind::Truncated, 800, 0.7).unwrap().m, 107);
        assert_eq!(WindowSpec::from_beta(WindowKind::Truncated, 100, 0.5).unwrap().m, 10);
        assert!(WindowSpec::from_beta(WindowKind::Truncated, 100, 1.0).is_err());
        assert!(WindowSpec::new(WindowKind::Parzen, 0).is_err());
        let b = WindowSpec::breakdown_bound(WindowKind::Truncated, 300, 15).unwrap();
        assert_eq!(b.m, 239);
        let b = WindowSpec::breakdown_bound(WindowKind::Truncated, 300, 0).unwrap();
        assert_eq!(b.m, 298);
        let b = WindowSpec::breakdown_bound(WindowKind::Truncated, 300, 100).unwrap();
        assert_eq!(b.m, 1);
    }

    #[test]
    fn parses_names() {
        assert_eq!("parzen".parse::<WindowKind>().unwrap(), WindowKind::Parzen);
        assert_eq!("TH".parse::<WindowKind>().unwrap(), WindowKind::TukeyHamming);
        assert!("hann".parse::<WindowKind>().is_err());
        for kind in WindowKind::ALL {
            assert_eq!(kind.to_string().parse::<WindowKind>().unwrap(), kind);
        }
    }
}
