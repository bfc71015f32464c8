//! Plain-text matrix cache.
//!
//! ```text
//! cbosel-matrix v1 <rows> <cols>
//! <row 0: tab-separated reals>
//! ...
//! labels: <space-separated integers>
//! ```
//!
//! Reals are written in shortest round-trip (`Debug`) form, so reloading is exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::LabeledDataset;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAGIC: &str = "cbosel-matrix v1";

pub fn to_native_string<T: Scalar>(dataset: &LabeledDataset<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} {} {}", dataset.n_samples(), dataset.n_features());
    for row in dataset.rows() {
        let mut first = true;
        for v in row {
            if !first {
                out.push('\t');
            }
            first = false;
            let _ = write!(out, "{v:?}");
        }
        out.push('\n');
    }
    out.push_str("labels:");
    for l in dataset.labels() {
        let _ = write!(out, " {l}");
    }
    out.push('\n');
    out
}

pub fn write_native<T: Scalar>(dataset: &LabeledDataset<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_native_string(dataset)).map_err(|e| Error::io(path, e))
}

/// Parses the cache format. Class count is `max(label) + 1` unless `n_classes` is given.
pub fn parse_native<T: Scalar>(text: &str, path: &Path, n_classes: Option<usize>) -> Result<LabeledDataset<T>> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let dims = header
        .strip_prefix(MAGIC)
        .ok_or_else(|| err(1, format!("missing '{MAGIC}' header")))?;
    let dims: Vec<usize> = dims
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| err(1, format!("invalid dimension '{t}'"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(err(1, "header needs <rows> <cols>".into()));
    };
    let mut features = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (i, line) = lines
            .next()
            .ok_or_else(|| err(r + 2, format!("expected {rows} rows, found {r}")))?;
        let before = features.len();
        for tok in line.split('\t') {
            let v = tok
                .trim()
                .parse::<T>()
                .map_err(|_| err(i + 1, format!("invalid number '{tok}'")))?;
            features.push(v);
        }
        if features.len() - before != cols {
            return Err(err(
                i + 1,
                format!("expected {cols} values, found {}", features.len() - before),
            ));
        }
    }
    let (i, line) = lines
        .next()
        .ok_or_else(|| err(rows + 2, "missing labels line".into()))?;
    let labels: Vec<usize> = line
        .strip_prefix("labels:")
        .ok_or_else(|| err(i + 1, "expected 'labels:' line".into()))?
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| err(i + 1, format!("invalid label '{t}'"))))
        .collect::<Result<_>>()?;
    if labels.len() != rows {
        return Err(err(i + 1, format!("{} labels for {rows} rows", labels.len())));
    }
    let k = n_classes.unwrap_or_else(|| labels.iter().max().map_or(1, |m| m + 1));
    LabeledDataset::unnamed(features, cols, labels, k)
}

pub fn read_native<T: Scalar>(path: impl AsRef<Path>) -> Result<LabeledDataset<T>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_native(&text, path, None)
}
