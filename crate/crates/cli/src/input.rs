use std::fs::File;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use robustlm::TimeSeries;

use crate::error::CliError;

/// Column chosen by header name or 0-based index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Index(usize),
    Name(String),
}

impl Default for ColumnSelector {
    fn default() -> Self {
        ColumnSelector::Index(0)
    }
}

impl std::fmt::Display for ColumnSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ColumnSelector::Index(i) => write!(f, "{i}"),
            ColumnSelector::Name(n) => f.write_str(n),
        }
    }
}

impl FromStr for ColumnSelector {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        })
    }
}

#[derive(Debug, Clone)]
pub struct DatasetFile {
    pub path: PathBuf,
    pub column: ColumnSelector,
    pub series: TimeSeries,
}

fn parse_number(field: &str) -> Option<f64> {
    field.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn is_missing(field: &str) -> bool {
    matches!(
        field.trim().to_ascii_lowercase().as_str(),
        "" | "na" | "nan" | "null" | "."
    )
}

/// Parses CSV text: `#` comment lines, optional header row, `.` decimals.
pub fn parse_series(text: &str, column: &ColumnSelector) -> Result<Vec<f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records().peekable();

    let mut index = match column {
        ColumnSelector::Index(i) => Some(*i),
        ColumnSelector::Name(_) => None,
    };
    // A first row whose selected field is not numeric is a header.
    if let Some(Ok(first)) = records.peek() {
        let header = match (column, index) {
            (ColumnSelector::Name(_), _) => true,
            (_, Some(i)) => first.get(i).is_some_and(|f| parse_number(f).is_none() && !is_missing(f)),
            _ => false,
        };
        if header {
            if let ColumnSelector::Name(name) = column {
                index = Some(first.iter().position(|f| f == name).ok_or_else(|| {
                    CliError::Input(format!("no column named `{name}` in the header"))
                })?);
            }
            records.next();
        }
    }
    let index = index.ok_or_else(|| CliError::Input("file is empty".into()))?;

    let mut values = Vec::new();
    let mut missing = Vec::new();
    for record in records {
        let record = record.map_err(|e| CliError::Input(format!("malformed CSV: {e}")))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = record.get(index).ok_or_else(|| {
            CliError::Input(format!("row {line} has no column {index}"))
        })?;
        if is_missing(field) {
            missing.push(line);
            continue;
        }
        let value = parse_number(field).ok_or_else(|| {
            CliError::Input(format!("row {line}: `{field}` is not a finite number"))
        })?;
        values.push(value);
    }
    if !missing.is_empty() {
        let rows: Vec<String> = missing.iter().map(|r| r.to_string()).collect();
        return Err(CliError::Input(format!(
            "missing values on rows {}",
            rows.join(", ")
        )));
    }
    if values.is_empty() {
        return Err(CliError::Input("no observations found".into()));
    }
    Ok(values)
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Input(format!("reading stdin: {e}")))?;
    } else {
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|e| CliError::Input(format!("reading {}: {e}", path.display())))?;
    }
    Ok(text)
}

pub fn load(path: &Path, column: &ColumnSelector) -> Result<DatasetFile, CliError> {
    let values = parse_series(&read_text(path)?, column)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(DatasetFile {
        path: path.to_path_buf(),
        column: column.clone(),
        series: TimeSeries::new(values).map_err(|e| CliError::Input(e.to_string()))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_column() {
        let v = parse_series("# comment\n1.5\n-2\n3e2\n", &ColumnSelector::default()).unwrap();
        assert_eq!(v, vec![1.5, -2.0, 300.0]);
    }

    #[test]
    fn header_and_named_column() {
        let text = "date,value\n2001-01,1.0\n2001-02,2.5\n";
        let by_name = parse_series(text, &"value".parse().unwrap()).unwrap();
        let by_index = parse_series(text, &ColumnSelector::Index(1)).unwrap();
        assert_eq!(by_name, vec![1.0, 2.5]);
        assert_eq!(by_index, by_name);
        assert!(parse_series(text, &"price".parse().unwrap()).is_err());
    }

    #[test]
    fn missing_values_report_rows() {
        let err = parse_series("x\n1\n\n2\nNA\n3\n,\n", &ColumnSelector::Index(0)).unwrap_err();
        // blank lines are skipped by the reader; NA and empty fields are not
        let msg = err.to_string();
        assert!(msg.contains("missing values on rows 5"), "{msg}");
    }

    #[test]
    fn non_numeric_is_rejected() {
        let err = parse_series("1\n2\nabc\n", &ColumnSelector::Index(0)).unwrap_err();
        assert!(err.to_string().contains("row 3"), "{err}");
        let err = parse_series("a\nb\n", &ColumnSelector::Index(0)).unwrap_err();
        assert!(matches!(err, CliError::Input(_)));
    }
}
