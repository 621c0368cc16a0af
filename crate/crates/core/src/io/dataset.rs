//! Signal matrices from CSV.
//!
//! Rows are nodes and columns are samples unless `transpose` is set. A header
//! row and a leading label column are detected automatically: the first
//! column is a label column when the last row's first cell is not a number,
//! and the first row is a header when any of its (non-label) cells is not a
//! number.

use std::path::Path;

use ndarray::{Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::detector::SignalMatrix;
use crate::error::{Error, Result};

use super::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetOptions {
    /// Remove per-node means before forming the covariance.
    pub center: bool,
    /// Rescale every node's series to zero mean and unit variance on load.
    pub standardize_rows: bool,
    /// The file has one sample per row.
    pub transpose: bool,
}

impl Default for DatasetOptions {
    fn default() -> Self {
        Self { center: true, standardize_rows: false, transpose: false }
    }
}

fn is_number(cell: &str) -> bool {
    cell.trim().parse::<f64>().is_ok()
}

pub fn parse_signal_csv(text: &str, opts: &DatasetOptions) -> Result<SignalMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        rows.push((line, rec.iter().map(str::to_owned).collect()));
    }
    let Some((_, last)) = rows.last() else {
        return Err(Error::Parse { line: 1, message: "no data rows".into() });
    };

    let label_col = !is_number(&last[0]);
    let skip = label_col as usize;
    let header = rows.len() > 1 && rows[0].1.iter().skip(skip).any(|c| !is_number(c));
    let body = &rows[header as usize..];

    let width = body[0].1.len();
    if width <= skip {
        return Err(Error::Parse { line: body[0].0, message: "row has no numeric columns".into() });
    }
    let cols = width - skip;
    let mut values = Vec::with_capacity(body.len() * cols);
    for (line, cells) in body {
        if cells.len() != width {
            return Err(Error::Parse {
                line: *line,
                message: format!("expected {width} fields, found {}", cells.len()),
            });
        }
        for (k, cell) in cells.iter().enumerate().skip(skip) {
            if cell.is_empty() {
                return Err(Error::Parse { line: *line, message: format!("empty cell in column {}", k + 1) });
            }
            let x: f64 = cell.parse().map_err(|_| Error::Parse {
                line: *line,
                message: format!("non-numeric cell {cell:?} in column {}", k + 1),
            })?;
            if !x.is_finite() {
                return Err(Error::Parse { line: *line, message: format!("non-finite value {cell:?} in column {}", k + 1) });
            }
            values.push(x);
        }
    }

    let mut data = Array2::from_shape_vec((body.len(), cols), values)
        .map_err(|e| Error::invalid(format!("cannot shape signal matrix: {e}")))?;
    if opts.transpose {
        data = data.reversed_axes().as_standard_layout().to_owned();
    }
    if opts.standardize_rows {
        standardize(&mut data, |i| if opts.transpose { body[0].0 } else { body[i].0 }, opts.transpose)?;
    }
    SignalMatrix::new(data)
}

fn standardize(data: &mut Array2<f64>, line_of: impl Fn(usize) -> usize, transposed: bool) -> Result<()> {
    for (i, mut row) in data.axis_iter_mut(Axis(0)).enumerate() {
        let m = row.len() as f64;
        let mean = row.sum() / m;
        let var = row.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m;
        if !(var > 0.0) {
            let what = if transposed { format!("column {}", i + 1) } else { "row".to_owned() };
            return Err(Error::Parse {
                line: line_of(i),
                message: format!("{what} has zero variance and cannot be standardized"),
            });
        }
        let sd = var.sqrt();
        row.mapv_inplace(|x| (x - mean) / sd);
    }
    Ok(())
}

pub fn load_signal_matrix(path: impl AsRef<Path>, opts: &DatasetOptions) -> Result<SignalMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_signal_csv(&text, opts)
}

/// One node per line, samples comma-separated, no header.
pub fn format_signal_csv(y: &SignalMatrix) -> String {
    let mut out = String::new();
    for row in y.data().rows() {
        let line: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
