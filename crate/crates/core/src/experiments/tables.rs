//! The three simulation grids: stationary fractional noise with and without
//! outliers, lag-window comparison, and differenced non-stationary series.
//! All use `alpha = beta = 0.7` and one outlier type of magnitude 10 fired
//! with probability 0.05.

use crate::contamination::OutlierSpec;
use crate::error::{Error, Result};
use crate::model::ArfimaSpec;
use crate::seed::derive;
use crate::spectral::WindowKind;

use super::{run_monte_carlo, EstimatorSpec, McConfig, McReport};

pub const OUTLIER_MAGNITUDE: f64 = 10.0;
pub const OUTLIER_PROBABILITY: f64 = 0.05;
pub const MIN_SCALE: usize = 100;

fn outliers() -> OutlierSpec {
    OutlierSpec::single(OUTLIER_MAGNITUDE, OUTLIER_PROBABILITY).expect("valid outlier setting")
}

/// `(d of the simulated series, n, differencing)` per row.
fn rows(table: u8) -> Result<Vec<(f64, usize, bool)>> {
    Ok(match table {
        1 => [0.3, 0.45]
            .iter()
            .flat_map(|&d| [100, 300, 800].map(|n| (d, n, false)))
            .collect(),
        2 => [100, 300, 800].map(|n| (0.3, n, false)).to_vec(),
        3 => vec![
            (-0.2, 300, true),
            (-0.2, 800, true),
            (0.0, 100, true),
            (0.0, 300, true),
            (0.0, 800, true),
        ],
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown table {other}; expected 1, 2 or 3"
            )))
        }
    })
}

fn estimators(table: u8) -> Vec<EstimatorSpec> {
    match table {
        2 => vec![
            EstimatorSpec::gphr(WindowKind::Parzen),
            EstimatorSpec::gphr(WindowKind::TukeyHamming),
            EstimatorSpec::gphr(WindowKind::Bartlett),
        ],
        _ => vec![EstimatorSpec::gph(), EstimatorSpec::gphr(WindowKind::Truncated)],
    }
}

/// Cell id used for a table row, e.g. `d=0.3;n=300`.
pub fn row_id(true_d: f64, n: usize) -> String {
    format!("d={true_d};n={n}")
}

/// The run configurations behind `table`, one per row, each with its own
/// seed derived from `master_seed`.
pub fn table_configs(table: u8, scale: usize, master_seed: u64) -> Result<Vec<McConfig>> {
    if scale < MIN_SCALE {
        return Err(Error::InvalidConfig(format!(
            "scale {scale} below the minimum of {MIN_SCALE} replicates"
        )));
    }
    Ok(rows(table)?
        .into_iter()
        .enumerate()
        .map(|(k, (d, n, differencing))| {
            let true_d = if differencing { d + 1.0 } else { d };
            McConfig {
                arfima: ArfimaSpec::fractional_noise(d),
                n,
                replicates: scale,
                outliers: Some(outliers()),
                estimators: estimators(table),
                differencing,
                master_seed: derive(master_seed, k as u64),
                cell_id: Some(row_id(true_d, n)),
            }
        })
        .collect())
}

/// Runs every row of `table` with `scale` replicates.
pub fn reproduce_table(table: u8, scale: usize, master_seed: u64) -> Result<McReport> {
    let mut report = McReport {
        master_seed,
        paired: true,
        cells: Vec::new(),
    };
    for config in table_configs(table, scale, master_seed)? {
        report.extend(run_monte_carlo(&config)?);
    }
    Ok(report)
}
