//! Delimited-text ingestion.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decompose::GroupedSample;
use crate::sample::Sample;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed delimited text: {0}")]
    Csv(#[from] csv::Error),
    #[error("no column named or numbered {0:?}")]
    UnknownColumn(String),
    #[error("column {0:?} is used for more than one role")]
    DuplicateColumn(String),
    #[error("line {line}, column {column:?}: cannot parse {cell:?} as a number")]
    Parse { line: u64, column: String, cell: String },
    #[error("line {line}, column {column:?}: missing value")]
    Missing { line: u64, column: String },
    #[error("no usable rows")]
    NoRows,
}

/// A column chosen by header name or by zero-based position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColumnRef {
    Name(String),
    Index(usize),
}

impl ColumnRef {
    /// Header names win; a bare number that matches no header is a position.
    fn resolve(&self, headers: &csv::StringRecord) -> Result<usize, LoadError> {
        match self {
            ColumnRef::Index(i) if *i < headers.len() => Ok(*i),
            ColumnRef::Index(i) => Err(LoadError::UnknownColumn(i.to_string())),
            ColumnRef::Name(name) => headers
                .iter()
                .position(|h| h.trim() == name)
                .or_else(|| name.parse::<usize>().ok().filter(|&i| i < headers.len()))
                .ok_or_else(|| LoadError::UnknownColumn(name.clone())),
        }
    }
}

impl From<&str> for ColumnRef {
    fn from(s: &str) -> Self {
        ColumnRef::Name(s.to_string())
    }
}

impl fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnRef::Name(n) => f.write_str(n),
            ColumnRef::Index(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicy {
    #[default]
    Error,
    /// Skip rows with a blank or unparseable value, weight or group cell.
    Drop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Delimiter {
    Comma,
    Tab,
}

impl Delimiter {
    fn byte(self) -> u8 {
        match self {
            Delimiter::Comma => b',',
            Delimiter::Tab => b'\t',
        }
    }

    /// Tab if the header line has tabs and no commas, comma otherwise.
    fn sniff(header_line: &str) -> Delimiter {
        if header_line.contains('\t') && !header_line.contains(',') {
            Delimiter::Tab
        } else {
            Delimiter::Comma
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub path: PathBuf,
    pub value_column: ColumnRef,
    pub weight_column: Option<ColumnRef>,
    pub group_column: Option<ColumnRef>,
    pub missing: MissingPolicy,
    /// `None` to detect from the header line.
    pub delimiter: Option<Delimiter>,
}

impl DatasetSpec {
    pub fn new(path: impl Into<PathBuf>, value_column: impl Into<ColumnRef>) -> Self {
        DatasetSpec {
            path: path.into(),
            value_column: value_column.into(),
            weight_column: None,
            group_column: None,
            missing: MissingPolicy::Error,
            delimiter: None,
        }
    }
}

/// Loaded observations plus bookkeeping for the run report.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub sample: Sample,
    pub labels: Option<Vec<String>>,
    pub rows_read: usize,
    pub rows_dropped: usize,
    pub warnings: Vec<String>,
}

impl Dataset {
    pub fn grouped(&self) -> Option<GroupedSample> {
        self.labels
            .as_ref()
            .map(|labels| GroupedSample::new(self.sample.clone(), labels.clone()))
    }
}

/// Parse a plain decimal number: optional sign, digits, optional fraction
/// and exponent. Locale forms ("1,5"), `inf` and `nan` are rejected.
pub fn parse_number(cell: &str) -> Option<f64> {
    let s = cell.trim();
    let plain = !s.is_empty()
        && s.bytes().any(|b| b.is_ascii_digit())
        && s.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-'));
    if !plain {
        return None;
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

pub fn load(spec: &DatasetSpec) -> Result<Dataset, LoadError> {
    let io_err = |source| LoadError::Io {
        path: spec.path.clone(),
        source,
    };
    let file = File::open(&spec.path).map_err(io_err)?;
    let mut reader = BufReader::new(file);
    let delimiter = match spec.delimiter {
        Some(d) => d,
        None => {
            let mut first = String::new();
            reader.read_line(&mut first).map_err(io_err)?;
            let d = Delimiter::sniff(&first);
            return load_from(spec, d, first.as_bytes().chain(reader));
        }
    };
    load_from(spec, delimiter, reader)
}

/// Load from any reader; used by [`load`] and directly in tests.
pub fn load_from(spec: &DatasetSpec, delimiter: Delimiter, input: impl Read) -> Result<Dataset, LoadError> {
    let mut csv = csv::ReaderBuilder::new()
        .delimiter(delimiter.byte())
        .has_headers(true)
        .flexible(false)
        .from_reader(input);
    let headers = csv.headers()?.clone();

    let value_at = spec.value_column.resolve(&headers)?;
    let weight_at = spec.weight_column.as_ref().map(|c| c.resolve(&headers)).transpose()?;
    let group_at = spec.group_column.as_ref().map(|c| c.resolve(&headers)).transpose()?;
    let used: Vec<usize> = [Some(value_at), weight_at, group_at].into_iter().flatten().collect();
    for (k, a) in used.iter().enumerate() {
        if used[..k].contains(a) {
            return Err(LoadError::DuplicateColumn(headers[*a].to_string()));
        }
    }

    let mut values = Vec::new();
    let mut weights = weight_at.map(|_| Vec::new());
    let mut labels = group_at.map(|_| Vec::new());
    let mut rows_read = 0;
    let mut blank_drops = 0;
    let mut parse_drops = 0;

    let mut record = csv::StringRecord::new();
    while csv.read_record(&mut record)? {
        rows_read += 1;
        let line = record.position().map_or(0, |p| p.line());
        let cell = |at: usize| record.get(at).unwrap_or("").trim();

        let mut row_problem = None;
        let mut number = |at: usize| -> Option<f64> {
            let raw = cell(at);
            let column = headers[at].to_string();
            if raw.is_empty() {
                row_problem.get_or_insert(LoadError::Missing { line, column });
                return None;
            }
            let parsed = parse_number(raw);
            if parsed.is_none() {
                row_problem.get_or_insert(LoadError::Parse {
                    line,
                    column,
                    cell: raw.to_string(),
                });
            }
            parsed
        };
        let value = number(value_at);
        let weight = weight_at.map(&mut number);
        let label = group_at.map(|at| cell(at).to_string());
        if let (Some(at), Some("")) = (group_at, label.as_deref()) {
            row_problem.get_or_insert(LoadError::Missing {
                line,
                column: headers[at].to_string(),
            });
        }

        match row_problem {
            None => {
                values.push(value.expect("checked"));
                if let (Some(ws), Some(w)) = (weights.as_mut(), weight) {
                    ws.push(w.expect("checked"));
                }
                if let (Some(ls), Some(l)) = (labels.as_mut(), label) {
                    ls.push(l);
                }
            }
            Some(problem) if spec.missing == MissingPolicy::Drop => match problem {
                LoadError::Missing { .. } => blank_drops += 1,
                _ => parse_drops += 1,
            },
            Some(problem) => return Err(problem),
        }
    }

    if values.is_empty() {
        return Err(LoadError::NoRows);
    }
    let mut warnings = Vec::new();
    if blank_drops > 0 {
        warnings.push(format!("dropped {blank_drops} row(s) with missing cells"));
    }
    if parse_drops > 0 {
        warnings.push(format!("dropped {parse_drops} row(s) with unparseable numbers"));
    }
    let sample = match weights {
        Some(ws) => Sample::weighted(values, ws),
        None => Sample::new(values),
    };
    Ok(Dataset {
        sample,
        labels,
        rows_read,
        rows_dropped: blank_drops + parse_drops,
        warnings,
    })
}
