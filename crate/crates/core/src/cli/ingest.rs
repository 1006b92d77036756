//! CSV ingestion.
//!
//! Comma-separated, '.' decimals, header required. The `time` column is
//! mandatory; a `status` (or `cens`) column of 0/1 flags marks failures (1)
//! and censored rows (0); every other column is a covariate. Row numbers in
//! diagnostics count data rows from 1.

use std::path::Path;

use thiserror::Error;

use crate::regression::SurvivalDataset;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}: file is empty")]
    Empty(String),
    #[error("{path}: missing required column '{column}' (header: {header})")]
    MissingColumn {
        path: String,
        column: &'static str,
        header: String,
    },
    #[error("{path}: row {row}, column '{column}': cannot parse '{value}' as {expected}")]
    Malformed {
        path: String,
        row: usize,
        column: String,
        value: String,
        expected: &'static str,
    },
    #[error("{path}: row {row}: time must be positive, got {value}")]
    NonPositiveTime { path: String, row: usize, value: f64 },
    #[error("{path}: {message}")]
    Csv { path: String, message: String },
    #[error("{path}: {source}")]
    Dataset {
        path: String,
        #[source]
        source: crate::Error,
    },
}

/// Parsed table before it becomes a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub times: Vec<f64>,
    pub status: Option<Vec<bool>>,
    pub covariate_names: Vec<String>,
    pub covariates: Vec<Vec<f64>>,
}

impl Table {
    /// Failure indicators, all true when the file has no status column.
    pub fn status_or_all(&self) -> Vec<bool> {
        self.status.clone().unwrap_or_else(|| vec![true; self.times.len()])
    }

    pub fn is_plain_sample(&self) -> bool {
        self.covariate_names.is_empty() && self.status.as_ref().is_none_or(|s| s.iter().all(|&v| v))
    }
}

const STATUS_NAMES: [&str; 2] = ["status", "cens"];

pub fn read_table(path: &Path) -> Result<Table, IngestError> {
    let p = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|source| IngestError::Io {
        path: p.clone(),
        source,
    })?;
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Err(IngestError::Empty(p));
    }
    parse_table(&bytes, &p)
}

pub fn parse_table(bytes: &[u8], path: &str) -> Result<Table, IngestError> {
    let csv_err = |e: csv::Error| IngestError::Csv {
        path: path.to_string(),
        message: e.to_string(),
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let find = |names: &[&str]| {
        header
            .iter()
            .position(|h| names.iter().any(|n| h.eq_ignore_ascii_case(n)))
    };
    let time_col = find(&["time"]).ok_or_else(|| IngestError::MissingColumn {
        path: path.to_string(),
        column: "time",
        header: header.join(","),
    })?;
    let status_col = find(&STATUS_NAMES);
    let cov_cols: Vec<usize> = (0..header.len())
        .filter(|&j| j != time_col && Some(j) != status_col)
        .collect();

    let mut table = Table {
        times: Vec::new(),
        status: status_col.map(|_| Vec::new()),
        covariate_names: cov_cols.iter().map(|&j| header[j].clone()).collect(),
        covariates: Vec::new(),
    };
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(csv_err)?;
        let field = |j: usize| rec.get(j).unwrap_or("");
        let malformed = |j: usize, expected| IngestError::Malformed {
            path: path.to_string(),
            row,
            column: header[j].clone(),
            value: field(j).to_string(),
            expected,
        };
        let number = |j: usize| -> Result<f64, IngestError> {
            field(j)
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| malformed(j, "a finite number"))
        };
        let t = number(time_col)?;
        if t <= 0.0 {
            return Err(IngestError::NonPositiveTime {
                path: path.to_string(),
                row,
                value: t,
            });
        }
        table.times.push(t);
        if let (Some(j), Some(s)) = (status_col, table.status.as_mut()) {
            match field(j) {
                "1" => s.push(true),
                "0" => s.push(false),
                _ => return Err(malformed(j, "0 or 1")),
            }
        }
        table
            .covariates
            .push(cov_cols.iter().map(|&j| number(j)).collect::<Result<_, _>>()?);
    }
    if table.times.is_empty() {
        return Err(IngestError::Empty(path.to_string()));
    }
    Ok(table)
}

/// Dataset with an intercept prepended to the covariate columns.
pub fn read_dataset(path: &Path) -> Result<SurvivalDataset, IngestError> {
    let table = read_table(path)?;
    to_dataset(&table, &path.display().to_string())
}

pub fn to_dataset(table: &Table, path: &str) -> Result<SurvivalDataset, IngestError> {
    SurvivalDataset::with_intercept(table.times.clone(), table.status_or_all(), &table.covariates).map_err(|source| {
        IngestError::Dataset {
            path: path.to_string(),
            source,
        }
    })
}
