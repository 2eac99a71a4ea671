// SPDX-License-Identifier: MIT OR Apache-2.0

//! On-disk formats shared by the command-line tools.
//!
//! | file          | shape                                                  |
//! |---------------|--------------------------------------------------------|
//! | series CSV    | `t,value`, `t` = 1, 2, ...                              |
//! | entropy CSV   | `t,h_norm`, first `t` = window size, 12 significant digits |
//! | joined CSV    | `t,value,h_norm`, `h_norm` empty before the first window |
//! | segment spec  | `{"segments": [{"dist": {"type": ...}, "length": n}]}` |
//! | truth JSON    | [`GroundTruth`]                                        |
//! | events JSON   | [`EventsDoc`]                                          |
//! | report JSON   | [`ReportDoc`]                                          |

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detection::{DetectionEvent, DetectorParams};
use crate::evaluation::EvaluationReport;
use crate::simulation::{GroundTruth, SegmentSpec};
use crate::sliding::{EntropySequence, Series};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("line {line}: {msg}")]
    Row { line: u64, msg: String },

    #[error("{0}")]
    Header(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Domain(#[from] crate::error::Error),
}

pub type FormatResult<T> = std::result::Result<T, FormatError>;

/// Segment list read by `simulate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecDoc {
    pub segments: Vec<SegmentSpec>,
}

/// Detector output: the parameters used and the events found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<DetectorParams>,
    pub events: Vec<DetectionEvent>,
}

/// Evaluation output with the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub params: ReportParams,
    #[serde(flatten)]
    pub report: EvaluationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub window: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector: Option<DetectorParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Formats `x` with 12 significant digits in plain decimal notation.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn write_series_csv<W: Write>(series: &Series, out: W) -> FormatResult<()> {
    let mut w = std::io::BufWriter::new(out);
    writeln!(w, "t,value")?;
    for (i, v) in series.values().iter().enumerate() {
        writeln!(w, "{},{}", i + 1, v)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a series CSV. The `value` column is required; when a `t` column is
/// present it must count 1, 2, 3, ...
pub fn read_series_csv<R: Read>(input: R) -> FormatResult<Series> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let value_col = col("value")
        .ok_or_else(|| FormatError::Header("series CSV needs a `value` column".into()))?;
    let t_col = col("t");

    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if let Some(tc) = t_col {
            let t: usize = parse_field(&record, tc, line, "t")?;
            if t != values.len() + 1 {
                return Err(FormatError::Row {
                    line,
                    msg: format!("expected t = {}, found {t}", values.len() + 1),
                });
            }
        }
        let v: f64 = parse_field(&record, value_col, line, "value")?;
        if !v.is_finite() {
            return Err(FormatError::Row {
                line,
                msg: format!("non-finite value {v}"),
            });
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(FormatError::Header("series CSV has no rows".into()));
    }
    Ok(Series::new(values)?)
}

pub fn write_entropy_csv<W: Write>(hseq: &EntropySequence, out: W) -> FormatResult<()> {
    let mut w = std::io::BufWriter::new(out);
    writeln!(w, "t,h_norm")?;
    for (t, h) in hseq.iter() {
        writeln!(w, "{t},{}", format_sig12(h))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an entropy CSV; the first `t` becomes the sequence offset.
pub fn read_entropy_csv<R: Read>(input: R) -> FormatResult<EntropySequence> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (t_col, h_col) = match (col("t"), col("h_norm")) {
        (Some(t), Some(h)) => (t, h),
        _ => {
            return Err(FormatError::Header(
                "entropy CSV needs `t` and `h_norm` columns".into(),
            ))
        }
    };

    let mut offset = None;
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let t: usize = parse_field(&record, t_col, line, "t")?;
        let start = *offset.get_or_insert(t);
        if t != start + values.len() {
            return Err(FormatError::Row {
                line,
                msg: format!("expected t = {}, found {t}", start + values.len()),
            });
        }
        let h: f64 = parse_field(&record, h_col, line, "h_norm")?;
        if !(0.0..=1.0).contains(&h) {
            return Err(FormatError::Row {
                line,
                msg: format!("h_norm {h} outside [0, 1]"),
            });
        }
        values.push(h);
    }
    let offset = offset.ok_or_else(|| FormatError::Header("entropy CSV has no rows".into()))?;
    Ok(EntropySequence::new(offset, values)?)
}

/// Series and entropy side by side; `h_norm` is blank where no window ends.
pub fn write_joined_csv<W: Write>(
    series: &Series,
    hseq: &EntropySequence,
    out: W,
) -> FormatResult<()> {
    let mut w = std::io::BufWriter::new(out);
    writeln!(w, "t,value,h_norm")?;
    for (i, v) in series.values().iter().enumerate() {
        let t = i + 1;
        match hseq.at(t) {
            Some(h) => writeln!(w, "{t},{v},{}", format_sig12(h))?,
            None => writeln!(w, "{t},{v},")?,
        }
    }
    w.flush()?;
    Ok(())
}

/// Parses a segment spec. An empty document is reported as "no segments".
pub fn read_spec(text: &str) -> FormatResult<Vec<SegmentSpec>> {
    if text.trim().is_empty() {
        return Err(crate::error::Error::NoSegments.into());
    }
    let doc: SpecDoc = serde_json::from_str(text)?;
    if doc.segments.is_empty() {
        return Err(crate::error::Error::NoSegments.into());
    }
    Ok(doc.segments)
}

/// Parses an events document. Blank input and a bare JSON array are also
/// accepted.
pub fn read_events(text: &str) -> FormatResult<EventsDoc> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(EventsDoc {
            params: None,
            events: Vec::new(),
        });
    }
    if trimmed.starts_with('[') {
        return Ok(EventsDoc {
            params: None,
            events: serde_json::from_str(trimmed)?,
        });
    }
    Ok(serde_json::from_str(trimmed)?)
}

pub fn read_truth(text: &str) -> FormatResult<GroundTruth> {
    let truth: GroundTruth = serde_json::from_str(text)?;
    if truth.change_points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FormatError::Header(
            "truth change_points must be strictly increasing".into(),
        ));
    }
    Ok(truth)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> FormatResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn parse_field<T: std::str::FromStr>(
    record: &csv::StringRecord,
    col: usize,
    line: u64,
    name: &str,
) -> FormatResult<T> {
    let raw = record.get(col).ok_or_else(|| FormatError::Row {
        line,
        msg: format!("missing `{name}` field"),
    })?;
    raw.parse().map_err(|_| FormatError::Row {
        line,
        msg: format!("cannot parse `{name}` from {raw:?}"),
    })
}
