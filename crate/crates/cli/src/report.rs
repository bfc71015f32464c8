//! Result rows, their CSV form and merged table rendering.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use cbosel_core::metrics::{Metrics, METRIC_COLUMNS};

use crate::error::CliError;

pub const LABEL_COLUMN: &str = "Algorithm";
pub const TRAILING_COLUMNS: [&str; 3] = ["Seed", "Features", "Learning percentage"];

/// Explains how the Accuracy column relates to the other columns.
pub const ACCURACY_NOTE: &str =
    "Accuracy is overall accuracy (trace / total); the other columns are unweighted means of per-class one-vs-rest values.";

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub label: String,
    pub metrics: Metrics,
    pub seed: u64,
    /// Number of feature columns the classifier saw.
    pub features: usize,
    /// Training share, or `published` for a dataset's own split.
    pub learning_percentage: String,
    /// Some class needed the zero-denominator rule.
    pub degenerate: bool,
    /// Not written to CSV so repeated runs stay byte-identical.
    pub wall_time: Duration,
}

pub fn header() -> Vec<String> {
    std::iter::once(LABEL_COLUMN)
        .chain(METRIC_COLUMNS)
        .chain(TRAILING_COLUMNS)
        .map(String::from)
        .collect()
}

impl ReportRow {
    fn fields(&self) -> Vec<String> {
        let mut f = vec![self.label.clone()];
        f.extend(self.metrics.csv_fields());
        f.push(self.seed.to_string());
        f.push(self.features.to_string());
        f.push(self.learning_percentage.clone());
        f
    }
}

pub fn rows_to_csv(rows: &[ReportRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Runtime(format!("csv: {e}"));
    w.write_record(header()).map_err(io)?;
    for r in rows {
        w.write_record(r.fields()).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Runtime(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// One parsed CSV row: label, the ten formatted metric values, trailing
/// metadata, all kept as text so rendering preserves the written digits.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub cells: Vec<String>,
}

/// Reads a report CSV, rejecting any header that differs from [`header`].
pub fn parse_report_csv(text: &str, origin: &Path) -> Result<Vec<TableRow>, CliError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let expected = header();
    let found: Vec<String> = r
        .headers()
        .map_err(|e| CliError::Runtime(format!("{}: {e}", origin.display())))?
        .iter()
        .map(String::from)
        .collect();
    for (i, want) in expected.iter().enumerate() {
        match found.get(i) {
            Some(got) if got == want => {}
            Some(got) => {
                return Err(CliError::Runtime(format!(
                    "{}: column {} is {got:?}, expected {want:?}",
                    origin.display(),
                    i + 1
                )))
            }
            None => {
                return Err(CliError::Runtime(format!(
                    "{}: missing column {want:?}",
                    origin.display()
                )))
            }
        }
    }
    if found.len() > expected.len() {
        return Err(CliError::Runtime(format!(
            "{}: unexpected column {:?}",
            origin.display(),
            found[expected.len()]
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Runtime(format!("{}: {e}", origin.display())))?;
        let cells: Vec<String> = rec.iter().map(String::from).collect();
        for (col, cell) in expected.iter().zip(&cells).skip(1).take(METRIC_COLUMNS.len()) {
            if cell.parse::<f64>().is_err() {
                return Err(CliError::Runtime(format!(
                    "{}: row {}: column {col:?} is not a number: {cell:?}",
                    origin.display(),
                    i + 2
                )));
            }
        }
        rows.push(TableRow { cells });
    }
    Ok(rows)
}

/// Markdown table with right-aligned numeric columns.
pub fn render_table(rows: &[TableRow]) -> String {
    let head = header();
    let mut widths: Vec<usize> = head.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(&r.cells) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cells: &[String], out: &mut String| {
        out.push('|');
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i == 0 {
                let _ = write!(out, " {c:<w$} |");
            } else {
                let _ = write!(out, " {c:>w$} |");
            }
        }
        out.push('\n');
    };
    line(&head, &mut out);
    out.push('|');
    for (i, w) in widths.iter().enumerate() {
        out.push_str(if i == 0 { ":" } else { "-" });
        out.push_str(&"-".repeat(*w));
        out.push_str(if i == 0 { "-|" } else { ":|" });
    }
    out.push('\n');
    for r in rows {
        line(&r.cells, &mut out);
    }
    out
}

/// Relative accuracy change of `a` over `b`, e.g. `+2.27%`.
pub fn relative_delta(a: f64, b: f64) -> String {
    if b == 0.0 {
        return "n/a".to_string();
    }
    format!("{:+.2}%", (a - b) / b * 100.0)
}

/// Compares row `reference`'s accuracy with every other row.
pub fn delta_summary(rows: &[ReportRow], reference: usize) -> String {
    let mut out = String::from("Accuracy deltas are relative: (a - b) / b.\n");
    if let Some(first) = rows.get(reference) {
        for (_, r) in rows.iter().enumerate().filter(|(i, _)| *i != reference) {
            let _ = writeln!(
                out,
                "{} accuracy {:.6} vs {} {:.6}: {}",
                first.label,
                first.metrics.accuracy,
                r.label,
                r.metrics.accuracy,
                relative_delta(first.metrics.accuracy, r.metrics.accuracy)
            );
        }
    }
    out
}
