use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Summary of one estimator under one contamination state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McCell {
    pub cell_id: String,
    /// `GPH`, `GPHR`, `GPHR-P`, ...; contaminated cells carry a `_c` suffix.
    pub estimator: String,
    pub contaminated: bool,
    pub true_d: f64,
    pub mean: f64,
    /// Denominator `R - 1`; `0` with `sd_defined = false` when `R = 1`.
    pub sd: f64,
    pub sd_defined: bool,
    pub bias: f64,
    /// `(1 / R) sum (d_r - d)^2`.
    pub mse: f64,
    /// Successful replicates.
    pub replicates: usize,
    pub failures: usize,
    pub mean_dropped_frequencies: f64,
    pub replicates_with_drops: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub master_seed: u64,
    /// Clean and contaminated cells were computed on the same base series.
    pub paired: bool,
    pub cells: Vec<McCell>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    #[serde(rename = "cell-id")]
    cell_id: &'a str,
    estimator: &'a str,
    mean: f64,
    sd: f64,
    bias: f64,
    mse: f64,
    replicates: usize,
    failures: usize,
}

impl McReport {
    /// Looks a cell up by id and estimator label.
    pub fn cell(&self, cell_id: &str, estimator: &str) -> Option<&McCell> {
        self.cells
            .iter()
            .find(|c| c.cell_id == cell_id && c.estimator == estimator)
    }

    /// Appends the cells of `other`.
    pub fn extend(&mut self, other: McReport) {
        self.paired &= other.paired;
        self.cells.extend(other.cells);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for c in &self.cells {
            w.serialize(CsvRow {
                cell_id: &c.cell_id,
                estimator: &c.estimator,
                mean: c.mean,
                sd: c.sd,
                bias: c.bias,
                mse: c.mse,
                replicates: c.replicates,
                failures: c.failures,
            })
            .map_err(|e| Error::Serialization(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))
    }
}
