//! Confusion matrices and the ten classification measures, macro-averaged
//! one-vs-rest for multiclass problems.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column order of a metric row.
pub const METRIC_COLUMNS: [&str; 10] = [
    "Accuracy",
    "Sensitivity",
    "Specificity",
    "Precision",
    "FPR",
    "FNR",
    "NPV",
    "FDR",
    "F1 score",
    "MCC",
];

/// `counts[t][p]`: samples of true class `t` predicted as `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn zeros(k: usize) -> Self {
        Self {
            counts: vec![vec![0; k]; k],
        }
    }

    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        let k = counts.len();
        if counts.iter().any(|r| r.len() != k) {
            return Err(Error::data("confusion matrix must be square"));
        }
        Ok(Self { counts })
    }

    pub fn from_predictions(truth: &[usize], predicted: &[usize], k: usize) -> Result<Self> {
        if truth.len() != predicted.len() {
            return Err(Error::Shape {
                expected: truth.len(),
                found: predicted.len(),
            });
        }
        let mut m = Self::zeros(k);
        for (&t, &p) in truth.iter().zip(predicted) {
            if t >= k || p >= k {
                return Err(Error::data(format!("label {} out of range for {k} classes", t.max(p))));
            }
            m.counts[t][p] += 1;
        }
        Ok(m)
    }

    pub fn n_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n_classes()).map(|i| self.counts[i][i]).sum()
    }

    /// Overall accuracy `trace / total`; 0 for an empty matrix.
    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            self.trace() as f64 / total as f64
        }
    }
}

pub fn confusion_from_predictions(truth: &[usize], predicted: &[usize], k: usize) -> Result<ConfusionMatrix> {
    ConfusionMatrix::from_predictions(truth, predicted, k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl BinaryCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// Class `k` against the rest.
pub fn one_vs_rest_counts(matrix: &ConfusionMatrix, k: usize) -> BinaryCounts {
    let c = matrix.counts();
    let tp = c[k][k];
    let fn_ = c[k].iter().sum::<u64>() - tp;
    let fp = c.iter().map(|row| row[k]).sum::<u64>() - tp;
    let tn = matrix.total() - tp - fp - fn_;
    BinaryCounts { tp, fp, tn, fn_ }
}

/// The ten measures; `degenerate` names any that hit a zero denominator and
/// were reported as 0.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub precision: f64,
    pub fpr: f64,
    pub fnr: f64,
    pub npv: f64,
    pub fdr: f64,
    pub f1: f64,
    pub mcc: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub degenerate: Vec<&'static str>,
}

impl Metrics {
    /// Values in [`METRIC_COLUMNS`] order.
    pub fn values(&self) -> [f64; 10] {
        [
            self.accuracy,
            self.sensitivity,
            self.specificity,
            self.precision,
            self.fpr,
            self.fnr,
            self.npv,
            self.fdr,
            self.f1,
            self.mcc,
        ]
    }

    /// Comma-separated values at six decimals.
    pub fn csv_fields(&self) -> Vec<String> {
        self.values().iter().map(|v| format!("{v:.6}")).collect()
    }
}

fn ratio(num: f64, den: f64, name: &'static str, flags: &mut Vec<&'static str>) -> f64 {
    if den == 0.0 {
        flags.push(name);
        0.0
    } else {
        num / den
    }
}

/// Standard binary measures from one set of counts.
pub fn compute_metrics(c: BinaryCounts) -> Result<Metrics> {
    let total = c.total();
    if total == 0 {
        return Err(Error::data("cannot compute metrics over zero samples"));
    }
    let (tp, fp, tn, fn_) = (c.tp as f64, c.fp as f64, c.tn as f64, c.fn_ as f64);
    let mut flags = Vec::new();
    let sensitivity = ratio(tp, tp + fn_, "sensitivity", &mut flags);
    let specificity = ratio(tn, tn + fp, "specificity", &mut flags);
    let precision = ratio(tp, tp + fp, "precision", &mut flags);
    let mcc_den = ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt();
    let mut m = Metrics {
        accuracy: (tp + tn) / total as f64,
        sensitivity,
        specificity,
        precision,
        fpr: ratio(fp, fp + tn, "fpr", &mut flags),
        fnr: ratio(fn_, fn_ + tp, "fnr", &mut flags),
        npv: ratio(tn, tn + fn_, "npv", &mut flags),
        fdr: ratio(fp, fp + tp, "fdr", &mut flags),
        f1: 0.0,
        mcc: ratio(tp * tn - fp * fn_, mcc_den, "mcc", &mut flags),
        degenerate: Vec::new(),
    };
    m.f1 = f1_score(precision, sensitivity);
    if precision + sensitivity == 0.0 {
        flags.push("f1");
    }
    m.degenerate = flags;
    Ok(m)
}

/// Harmonic mean of precision and sensitivity; 0 when both are 0.
pub fn f1_score(precision: f64, sensitivity: f64) -> f64 {
    if precision + sensitivity == 0.0 {
        0.0
    } else {
        2.0 * precision * sensitivity / (precision + sensitivity)
    }
}

/// Per-class measures plus their unweighted mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    /// Macro means, except `accuracy`, which is overall `trace / total`.
    pub summary: Metrics,
    pub per_class: Vec<Metrics>,
    /// Macro mean of the per-class one-vs-rest accuracies.
    pub macro_accuracy: f64,
}

impl MetricReport {
    /// Whether any class needed the zero-denominator rule.
    pub fn has_degenerate(&self) -> bool {
        self.per_class.iter().any(|m| !m.degenerate.is_empty())
    }
}

pub fn macro_average(matrix: &ConfusionMatrix) -> Result<MetricReport> {
    let k = matrix.n_classes();
    if k < 2 {
        return Err(Error::data("macro averaging needs at least two classes"));
    }
    let per_class = (0..k)
        .map(|c| compute_metrics(one_vs_rest_counts(matrix, c)))
        .collect::<Result<Vec<_>>>()?;
    let mean = |f: fn(&Metrics) -> f64| per_class.iter().map(f).sum::<f64>() / k as f64;
    let summary = Metrics {
        accuracy: matrix.accuracy(),
        sensitivity: mean(|m| m.sensitivity),
        specificity: mean(|m| m.specificity),
        precision: mean(|m| m.precision),
        fpr: mean(|m| m.fpr),
        fnr: mean(|m| m.fnr),
        npv: mean(|m| m.npv),
        fdr: mean(|m| m.fdr),
        f1: mean(|m| m.f1),
        mcc: mean(|m| m.mcc),
        degenerate: Vec::new(),
    };
    Ok(MetricReport {
        macro_accuracy: mean(|m| m.accuracy),
        summary,
        per_class,
    })
}

/// Convenience: confusion matrix and macro report in one step.
pub fn evaluate_predictions(truth: &[usize], predicted: &[usize], k: usize) -> Result<(ConfusionMatrix, MetricReport)> {
    let m = ConfusionMatrix::from_predictions(truth, predicted, k)?;
    let r = macro_average(&m)?;
    Ok((m, r))
}
