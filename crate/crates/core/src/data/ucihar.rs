//! Loader for the published UCI-HAR feature files.
//!
//! Expects `X_train.txt`, `y_train.txt`, `X_test.txt` and `y_test.txt` in
//! one directory (either the dataset root or its `train/` / `test/`
//! subdirectories). An optional `features.txt` supplies column names.

use std::fs;
use std::path::{Path, PathBuf};

use super::{LabeledDataset, Source};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const UCIHAR_FEATURES: usize = 561;

pub const UCIHAR_CLASSES: [&str; 6] = [
    "walking",
    "walking_upstairs",
    "walking_downstairs",
    "sitting",
    "standing",
    "laying",
];

/// The published train/test partition.
#[derive(Debug, Clone)]
pub struct UciHar<T> {
    pub train: LabeledDataset<T>,
    pub test: LabeledDataset<T>,
}

impl<T: Scalar> UciHar<T> {
    /// Both parts pooled, train rows first.
    pub fn pooled(&self) -> Result<LabeledDataset<T>> {
        self.train.concat(&self.test)
    }
}

fn locate(dir: &Path, part: &str, file: &str) -> PathBuf {
    let flat = dir.join(file);
    if flat.exists() {
        flat
    } else {
        dir.join(part).join(file)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn load_ucihar<T: Scalar>(dir: impl AsRef<Path>) -> Result<UciHar<T>> {
    let dir = dir.as_ref();
    let names_path = dir.join("features.txt");
    let names = if names_path.exists() {
        parse_feature_names(&read(&names_path)?, &names_path)?
    } else {
        default_names()
    };
    let mut parts = Vec::with_capacity(2);
    for part in ["train", "test"] {
        let x_path = locate(dir, part, &format!("X_{part}.txt"));
        let y_path = locate(dir, part, &format!("y_{part}.txt"));
        let features = parse_matrix::<T>(&read(&x_path)?, &x_path)?;
        let labels = parse_labels(&read(&y_path)?, &y_path)?;
        parts.push(assemble(features, labels, names.clone(), &y_path)?);
    }
    let test = parts.pop().unwrap();
    let train = parts.pop().unwrap();
    Ok(UciHar { train, test })
}

fn default_names() -> Vec<String> {
    (1..=UCIHAR_FEATURES).map(|j| format!("feature{j}")).collect()
}

fn parse_feature_names(text: &str, path: &Path) -> Result<Vec<String>> {
    let names: Vec<String> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace();
            let first = it.next().unwrap_or_default();
            it.next().unwrap_or(first).to_string()
        })
        .collect();
    if names.len() != UCIHAR_FEATURES {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: names.len(),
            message: format!("expected {UCIHAR_FEATURES} feature names, found {}", names.len()),
        });
    }
    Ok(names)
}

/// Parses whitespace-separated rows of exactly 561 reals.
pub fn parse_matrix<T: Scalar>(text: &str, path: &Path) -> Result<Vec<Vec<T>>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .map(T::of)
                    .ok_or_else(|| parse_err(format!("invalid number '{tok}'")))
            })
            .collect::<Result<Vec<T>>>()?;
        if row.len() != UCIHAR_FEATURES {
            return Err(parse_err(format!(
                "expected {UCIHAR_FEATURES} values, found {}",
                row.len()
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Parses one label per line, mapping `1..=6` onto `0..=5`.
pub fn parse_labels(text: &str, path: &Path) -> Result<Vec<usize>> {
    let mut labels = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let tok = line.trim();
        if tok.is_empty() {
            continue;
        }
        match tok.parse::<usize>() {
            Ok(v) if (1..=UCIHAR_CLASSES.len()).contains(&v) => labels.push(v - 1),
            _ => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: format!("label '{tok}' is not in 1..=6"),
                })
            }
        }
    }
    Ok(labels)
}

fn assemble<T: Scalar>(
    rows: Vec<Vec<T>>,
    labels: Vec<usize>,
    names: Vec<String>,
    label_path: &Path,
) -> Result<LabeledDataset<T>> {
    if rows.len() != labels.len() {
        return Err(Error::Parse {
            path: label_path.to_path_buf(),
            line: labels.len().min(rows.len()) + 1,
            message: format!("{} feature rows but {} labels", rows.len(), labels.len()),
        });
    }
    LabeledDataset::new(
        rows.into_iter().flatten().collect(),
        UCIHAR_FEATURES,
        labels,
        UCIHAR_CLASSES.iter().map(|s| s.to_string()).collect(),
        names,
        Source::Ucihar,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: f64) -> String {
        vec![format!("{v:e}"); UCIHAR_FEATURES].join(" ")
    }

    fn fixture(dir: &Path, x: &str, y: &str) {
        for part in ["train", "test"] {
            fs::write(dir.join(format!("X_{part}.txt")), x).unwrap();
            fs::write(dir.join(format!("y_{part}.txt")), y).unwrap();
        }
    }

    #[test]
    fn loads_three_rows() {
        let tmp = tempfile::tempdir().unwrap();
        let x = format!("  {}\n{}\n{}\n", row(0.25), row(-1.0), row(0.5));
        fixture(tmp.path(), &x, "1\n6\n3\n");
        let d = load_ucihar::<f64>(tmp.path()).unwrap();
        assert_eq!(d.train.n_samples(), 3);
        assert_eq!(d.train.n_features(), 561);
        assert_eq!(d.train.labels(), &[0, 5, 2]);
        assert_eq!(d.train.row(1)[560], -1.0);
        assert_eq!(d.train.class_names()[5], "laying");
        assert_eq!(d.pooled().unwrap().n_samples(), 6);
    }

    #[test]
    fn short_row_names_line() {
        let tmp = tempfile::tempdir().unwrap();
        let short = vec!["0.1"; 560].join(" ");
        let x = format!("{}\n{}\n", row(0.1), short);
        fixture(tmp.path(), &x, "1\n2\n");
        let err = load_ucihar::<f64>(tmp.path()).unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("560"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn label_out_of_range() {
        let tmp = tempfile::tempdir().unwrap();
        fixture(tmp.path(), &format!("{}\n", row(0.0)), "7\n");
        assert!(matches!(
            load_ucihar::<f64>(tmp.path()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn count_mismatch() {
        let tmp = tempfile::tempdir().unwrap();
        fixture(tmp.path(), &format!("{}\n{}\n", row(0.0), row(1.0)), "1\n");
        assert!(matches!(load_ucihar::<f64>(tmp.path()), Err(Error::Parse { .. })));
    }

    #[test]
    fn missing_directory_is_io_error() {
        assert!(matches!(load_ucihar::<f64>("/nonexistent/uci"), Err(Error::Io { .. })));
    }
}
