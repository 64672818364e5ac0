//! Reading series from CSV / JSON and writing result tables.
//!
//! Input CSV carries a `value` or `time,value` header; input JSON is an array
//! of numbers or of `{"time": .., "value": ..}` records. Output tables are
//! written with the shortest decimal representation that round-trips to the
//! same `f64`, infinite moments as `+inf` / `-inf`.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::moment::BreveMoment;
use crate::signal::TimeSeries;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("ParseError at row {row}: {reason}")]
    Parse { row: usize, reason: String },
    #[error("input contains no values")]
    EmptyInput,
    #[error("output error: {0}")]
    Output(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    /// `.json` means JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Self::Json,
            _ => Self::Csv,
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

pub fn read_series(path: &Path, format: Format) -> Result<TimeSeries, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_series(&text, format)
}

pub fn parse_series(text: &str, format: Format) -> Result<TimeSeries, IoError> {
    let (times, values) = match format {
        Format::Csv => parse_csv(text)?,
        Format::Json => parse_json(text)?,
    };
    if values.is_empty() {
        return Err(IoError::EmptyInput);
    }
    let series = match times {
        Some(t) => TimeSeries::with_timestamps(t, values),
        None => TimeSeries::new(values),
    };
    series.map_err(|e| IoError::Parse {
        row: match e {
            crate::Error::TimestampsNotIncreasing { index } => index + 1,
            _ => 0,
        },
        reason: e.to_string(),
    })
}

fn parse_number(field: &str, row: usize, column: &str) -> Result<f64, IoError> {
    let v: f64 = field.trim().parse().map_err(|_| IoError::Parse {
        row,
        reason: format!("{column} {field:?} is not a number"),
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(IoError::Parse {
            row,
            reason: format!("{column} {field:?} is not finite"),
        })
    }
}

type Columns = (Option<Vec<f64>>, Vec<f64>);

fn parse_csv(text: &str) -> Result<Columns, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| IoError::Parse {
            row: 0,
            reason: e.to_string(),
        })?
        .clone();
    let names: Vec<String> = headers.iter().map(|h| h.to_ascii_lowercase()).collect();
    let has_time = match names.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["value"] => false,
        ["time", "value"] => true,
        _ => {
            return Err(IoError::Parse {
                row: 0,
                reason: format!("expected header `value` or `time,value`, found {names:?}"),
            })
        }
    };
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| IoError::Parse {
            row,
            reason: e.to_string(),
        })?;
        if has_time {
            times.push(parse_number(&record[0], row, "time")?);
            values.push(parse_number(&record[1], row, "value")?);
        } else {
            values.push(parse_number(&record[0], row, "value")?);
        }
    }
    Ok((has_time.then_some(times), values))
}

fn json_number(v: &Value, row: usize, column: &str) -> Result<f64, IoError> {
    match v {
        Value::Number(n) => n.as_f64().filter(|x| x.is_finite()).ok_or(IoError::Parse {
            row,
            reason: format!("{column} is not a finite number"),
        }),
        other => Err(IoError::Parse {
            row,
            reason: format!("{column} must be a number, found {other}"),
        }),
    }
}

fn parse_json(text: &str) -> Result<Columns, IoError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| IoError::Parse {
        row: e.line(),
        reason: e.to_string(),
    })?;
    let Value::Array(items) = doc else {
        return Err(IoError::Parse {
            row: 0,
            reason: "expected a JSON array".into(),
        });
    };
    let records = matches!(items.first(), Some(Value::Object(_)));
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let row = i + 1;
        if records {
            let Value::Object(obj) = item else {
                return Err(IoError::Parse {
                    row,
                    reason: "expected a {time, value} record".into(),
                });
            };
            let get = |key: &str| {
                obj.get(key).ok_or(IoError::Parse {
                    row,
                    reason: format!("missing `{key}`"),
                })
            };
            values.push(json_number(get("value")?, row, "value")?);
            if let Some(t) = obj.get("time") {
                times.push(json_number(t, row, "time")?);
            }
        } else {
            values.push(json_number(item, row, "value")?);
        }
    }
    let times = match times.len() {
        0 => None,
        n if n == values.len() => Some(times),
        _ => {
            return Err(IoError::Parse {
                row: 0,
                reason: "either all records or none may carry `time`".into(),
            })
        }
    };
    Ok((times, values))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Moment(BreveMoment),
    Int(u64),
    Text(String),
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => Value::from(*v),
            Cell::Num(v) => Value::String(format_float(*v)),
            Cell::Moment(BreveMoment::Finite(s)) => Value::from(*s),
            Cell::Moment(m) => Value::String(m.to_string()),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(t) => Value::String(t.clone()),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(v) => f.write_str(&format_float(*v)),
            Cell::Moment(BreveMoment::Finite(s)) => f.write_str(&format_float(*s)),
            Cell::Moment(m) => write!(f, "{m}"),
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Text(t) => f.write_str(t),
        }
    }
}

/// Shortest representation that parses back to the same bits.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "+inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        let plain = format!("{v}");
        let exp = format!("{v:e}");
        if plain.len() <= exp.len() {
            plain
        } else {
            exp
        }
    }
}

/// Named columns of result rows. A single-record table is written to JSON as
/// an object rather than an array.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub single_record: bool,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            single_record: false,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<String, IoError> {
        match format {
            Format::Csv => {
                let mut writer = csv::Writer::from_writer(Vec::new());
                let out = |e: csv::Error| IoError::Output(e.to_string());
                writer.write_record(&self.columns).map_err(out)?;
                for row in &self.rows {
                    writer
                        .write_record(row.iter().map(|c| c.to_string()))
                        .map_err(out)?;
                }
                let bytes = writer
                    .into_inner()
                    .map_err(|e| IoError::Output(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| IoError::Output(e.to_string()))
            }
            Format::Json => {
                let objects: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(k, c)| (k.to_string(), c.to_json()))
                            .collect();
                        Value::Object(map)
                    })
                    .collect();
                let doc = if self.single_record && objects.len() == 1 {
                    objects.into_iter().next().unwrap()
                } else {
                    Value::Array(objects)
                };
                let mut text = serde_json::to_string_pretty(&doc)
                    .map_err(|e| IoError::Output(e.to_string()))?;
                text.push('\n');
                Ok(text)
            }
        }
    }

    /// Writes to `path`, or standard output when `None`.
    pub fn write(&self, path: Option<&Path>, format: Format) -> Result<(), IoError> {
        let text = self.render(format)?;
        match path {
            Some(p) => fs::write(p, text).map_err(|source| IoError::Io {
                path: p.display().to_string(),
                source,
            }),
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(text.as_bytes())
                    .and_then(|_| lock.flush())
                    .map_err(|source| IoError::Io {
                        path: "<stdout>".into(),
                        source,
                    })
            }
        }
    }
}
