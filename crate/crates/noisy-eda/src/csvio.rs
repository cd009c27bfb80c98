//! CSV writing and reading for the fixed report schemas.
//!
//! The values involved never contain commas, quotes or newlines (floats
//! use Rust's shortest round-trip formatting), so a quoting layer would be
//! dead code. Files use LF line endings and end with a newline, making
//! byte-for-byte comparison across runs meaningful.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const CURVE_HEADER: &str = "evals,mean_true_fitness,stderr";
pub const SUMMARY_HEADER: &str = "algorithm,k,param,nho,rq_mean,rq_stderr";
pub const FINAL_P_HEADER: &str = "bit,mean_p";

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Writes the anytime curve, one row per evaluation, numbered from 1.
pub fn write_curve(path: &Path, curve: &[(f64, f64)]) -> Result<()> {
    let mut out = String::with_capacity(32 + curve.len() * 24);
    out.push_str(CURVE_HEADER);
    out.push('\n');
    for (i, (mean, stderr)) in curve.iter().enumerate() {
        writeln!(out, "{},{mean},{stderr}", i + 1).expect("writing to a string cannot fail");
    }
    write_file(path, &out)
}

/// One row of a summary or sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: String,
    /// Virtual population size; empty field for algorithms without one.
    pub k: Option<f64>,
    /// The variant parameter: n, w or r (2 for the plain cGA).
    pub param: u64,
    pub nho: u32,
    pub rq_mean: f64,
    pub rq_stderr: f64,
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut out = String::new();
    out.push_str(SUMMARY_HEADER);
    out.push('\n');
    for row in rows {
        let k = row.k.map(|k| k.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{k},{},{},{},{}",
            row.algorithm, row.param, row.nho, row.rq_mean, row.rq_stderr
        )
        .expect("writing to a string cannot fail");
    }
    write_file(path, &out)
}

/// Writes the trial-averaged final probability vector, positions numbered
/// from 1.
pub fn write_final_p(path: &Path, mean_p: &[f64]) -> Result<()> {
    let mut out = String::with_capacity(16 + mean_p.len() * 12);
    out.push_str(FINAL_P_HEADER);
    out.push('\n');
    for (i, p) in mean_p.iter().enumerate() {
        writeln!(out, "{},{p}", i + 1).expect("writing to a string cannot fail");
    }
    write_file(path, &out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub evals: u64,
    pub mean: f64,
    pub stderr: f64,
}

/// A curve as plotted: a legend label and its points.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveData {
    pub label: String,
    pub points: Vec<CurvePoint>,
}

/// Reads a curve CSV back, labelling it with the file stem (or the parent
/// directory's name for the generic stem `curve`).
pub fn read_curve(path: &Path) -> Result<CurveData> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let parse_err = |line: usize, message: String| Error::CsvParse {
        path: path.to_owned(),
        line,
        message,
    };

    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header.trim_end() == CURVE_HEADER => {}
        Some(header) => {
            return Err(parse_err(
                1,
                format!("expected header `{CURVE_HEADER}`, found `{header}`"),
            ))
        }
        None => return Err(parse_err(1, "file is empty".into())),
    }

    let mut points = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let mut next_field = |name: &str| {
            fields
                .next()
                .ok_or_else(|| parse_err(line_no, format!("missing field `{name}`")))
        };
        let evals = next_field("evals")?
            .parse::<u64>()
            .map_err(|e| parse_err(line_no, format!("bad evals value: {e}")))?;
        let mean = next_field("mean_true_fitness")?
            .parse::<f64>()
            .map_err(|e| parse_err(line_no, format!("bad mean value: {e}")))?;
        let stderr = next_field("stderr")?
            .parse::<f64>()
            .map_err(|e| parse_err(line_no, format!("bad stderr value: {e}")))?;
        if fields.next().is_some() {
            return Err(parse_err(line_no, "too many fields".into()));
        }
        points.push(CurvePoint {
            evals,
            mean,
            stderr,
        });
    }
    if points.is_empty() {
        return Err(parse_err(2, "no data rows".into()));
    }

    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("curve");
    let label = if stem == "curve" {
        path.parent()
            .and_then(|p| p.file_name())
            .and_then(|s| s.to_str())
            .unwrap_or(stem)
            .to_owned()
    } else {
        stem.to_owned()
    };
    Ok(CurveData { label, points })
}
