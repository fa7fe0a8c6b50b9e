use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::CliError;

/// Buffered writer for `path`, or stdout when absent or `-`.
pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            let file = File::create(p)
                .map_err(|e| CliError::Input(format!("creating {}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

/// Header comment lines followed by one value per line. `{}` formatting
/// round-trips every `f64` exactly.
pub fn write_series(path: Option<&Path>, header: &[String], values: &[f64]) -> Result<(), CliError> {
    let mut out = open(path)?;
    for line in header {
        writeln!(out, "# {line}")?;
    }
    for v in values {
        writeln!(out, "{v}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn list<T: std::fmt::Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}
