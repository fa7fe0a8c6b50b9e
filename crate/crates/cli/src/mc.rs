//! `mc`: Monte Carlo runs from a JSON config.
//!
//! Two shapes are accepted:
//!
//! ```json
//! {"table": 1, "scale": 1000, "master_seed": 7}
//! {"runs": [{"arfima": {"d": 0.3}, "n": 300, "replicates": 500,
//!            "outliers": {"entries": [{"magnitude": 10, "probability": 0.05}]},
//!            "estimators": [{"kind": "gph"}, {"kind": "gphr", "window": "parzen"}],
//!            "master_seed": 7}]}
//! ```

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use robustlm::experiments::tables::reproduce_table;
use robustlm::experiments::{run_monte_carlo, McConfig, McReport};

use crate::error::CliError;
use crate::input::read_text;
use crate::output::open;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRun {
    pub table: u8,
    pub scale: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomRuns {
    pub runs: Vec<McConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum McPlan {
    Table(TableRun),
    Custom(CustomRuns),
}

fn with_path<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Input(format!("config schema at `{path}`: {}", e.into_inner()))
    })
}

/// Parses a config, reporting the line, column and field of schema errors.
pub fn parse_plan(text: &str) -> Result<McPlan, CliError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("config is not valid JSON: {e}")))?;
    match value.as_object() {
        Some(obj) if obj.contains_key("table") => Ok(McPlan::Table(with_path(text)?)),
        Some(obj) if obj.contains_key("runs") => Ok(McPlan::Custom(with_path(text)?)),
        _ => Err(CliError::Input(
            "config schema: expected an object with a `table` or a `runs` field".into(),
        )),
    }
}

pub fn run_plan(plan: &McPlan) -> Result<McReport, CliError> {
    match plan {
        McPlan::Table(t) => Ok(reproduce_table(t.table, t.scale, t.master_seed)?),
        McPlan::Custom(c) => {
            let (first, rest) = c
                .runs
                .split_first()
                .ok_or_else(|| CliError::Input("config schema: `runs` is empty".into()))?;
            let mut report = run_monte_carlo(first)?;
            for config in rest {
                report.extend(run_monte_carlo(config)?);
            }
            Ok(report)
        }
    }
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// JSON run configuration.
    pub config: PathBuf,
    /// CSV summary; printed to stdout when neither output is given.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// JSON report with the full per-cell statistics.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn write_to(path: &Path, text: &str) -> Result<(), CliError> {
    let mut out = open(Some(path))?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

pub fn mc(args: &McArgs) -> Result<(), CliError> {
    let plan = parse_plan(&read_text(&args.config)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.config.display())))?;
    let report = run_plan(&plan)?;
    if let Some(path) = &args.csv {
        write_to(path, &report.to_csv()?)?;
    }
    if let Some(path) = &args.json {
        write_to(path, &report.to_json()?)?;
    }
    if args.csv.is_none() && args.json.is_none() {
        let mut out = open(None)?;
        out.write_all(report.to_csv()?.as_bytes())?;
        out.flush()?;
    }
    Ok(())
}
