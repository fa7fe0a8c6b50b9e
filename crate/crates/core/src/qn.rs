//! Rousseeuw-Croux `Qn` scale: `c` times the `tau`-th smallest of the
//! `n (n - 1) / 2` pairwise absolute differences, with
//! `tau = floor((C(n, 2) + 2) / 4) + 1`.
//!
//! The order statistic is found without materializing all pairs. After
//! sorting, row `i` of the implicit matrix `y[j] - y[i]` (`j > i`) is
//! increasing, so the number of pairs below a trial value is counted in
//! `O(n)` with two pointers; randomly chosen trial values from the shrinking
//! candidate set narrow the search until it fits in memory. Expected cost is
//! `O(n log n)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Consistency constant for the standard normal distribution.
pub const QN_NORMAL_CONSISTENCY: f64 = 2.2191;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QnConfig {
    pub c: f64,
}

impl Default for QnConfig {
    fn default() -> Self {
        Self {
            c: QN_NORMAL_CONSISTENCY,
        }
    }
}

impl QnConfig {
    pub fn new(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "Qn consistency constant must be positive, got {c}"
            )));
        }
        Ok(Self { c })
    }

    /// 1-based rank of the selected pairwise distance for a sample of size `n`.
    pub fn tau(n: usize) -> usize {
        let pairs = n * n.saturating_sub(1) / 2;
        (pairs + 2) / 4 + 1
    }
}

/// `Qn` scale of `values`.
pub fn qn_scale(values: &[f64], config: &QnConfig) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(config.c * pairwise_order_statistic(values, QnConfig::tau(n)))
}

/// The `k`-th smallest (1-based) of `|x_i - x_j|`, `i < j`. Inputs must be
/// finite with `len >= 2` and `1 <= k <= C(len, 2)`.
pub fn pairwise_order_statistic(values: &[f64], k: usize) -> f64 {
    let n = values.len();
    let pairs = n * (n - 1) / 2;
    assert!(
        (1..=pairs).contains(&k),
        "rank {k} outside 1..={pairs}"
    );
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    kth_sorted_difference(&sorted, k)
}

/// SplitMix64; only drives pivot choice, never the result.
struct PivotRng(u64);

impl PivotRng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn below(&mut self, bound: usize) -> usize {
        ((self.next() as u128 * bound as u128) >> 64) as usize
    }
}

fn kth_sorted_difference(y: &[f64], k: usize) -> f64 {
    let n = y.len();
    // Candidate window of row i is columns lo[i]..hi[i].
    let mut lo: Vec<usize> = (1..=n).collect();
    let mut hi: Vec<usize> = vec![n; n];
    let mut first_ge = vec![0usize; n];
    let mut first_gt = vec![0usize; n];
    // Pairs excluded below the windows; all rank before k.
    let mut below = 0usize;
    let mut rng = PivotRng((n as u64) << 32 ^ k as u64);
    let materialize_at = (2 * n).max(64);

    loop {
        let remaining: usize = lo.iter().zip(&hi).map(|(l, h)| h - l).sum();
        if remaining <= materialize_at {
            let mut candidates = Vec::with_capacity(remaining);
            for i in 0..n {
                candidates.extend(y[lo[i]..hi[i]].iter().map(|v| v - y[i]));
            }
            let (_, value, _) = candidates.select_nth_unstable_by(k - below - 1, f64::total_cmp);
            return *value;
        }

        let mut r = rng.below(remaining);
        let mut pivot = 0.0;
        for i in 0..n {
            let width = hi[i] - lo[i];
            if r < width {
                pivot = y[lo[i] + r] - y[i];
                break;
            }
            r -= width;
        }

        let (mut less, mut less_eq) = (0usize, 0usize);
        let (mut p, mut q) = (0usize, 0usize);
        for i in 0..n {
            p = p.max(i + 1);
            while p < n && y[p] - y[i] < pivot {
                p += 1;
            }
            q = q.max(p);
            while q < n && y[q] - y[i] <= pivot {
                q += 1;
            }
            first_ge[i] = p;
            first_gt[i] = q;
            less += p - i - 1;
            less_eq += q - i - 1;
        }

        if k <= less {
            for i in 0..n {
                hi[i] = hi[i].min(first_ge[i]).max(lo[i]);
            }
        } else if k > less_eq {
            for i in 0..n {
                lo[i] = lo[i].max(first_gt[i]).min(hi[i]);
            }
            below = lo.iter().enumerate().map(|(i, l)| l - i - 1).sum();
        } else {
            return pivot;
        }
    }
}
