//! Statistical features of a triaxial accelerometer window.
//!
//! Layout (23 values): for each axis x, y, z in turn: mean, standard
//! deviation (population), mean absolute deviation, min, max, RMS; then the
//! correlations xy, xz, yz; then mean and standard deviation of the
//! resultant magnitude.

use crate::scalar::Scalar;

pub const N_WINDOW_FEATURES: usize = 23;

pub const WINDOW_FEATURE_NAMES: [&str; N_WINDOW_FEATURES] = [
    "x_mean", "x_std", "x_mad", "x_min", "x_max", "x_rms", "y_mean", "y_std", "y_mad", "y_min", "y_max", "y_rms",
    "z_mean", "z_std", "z_mad", "z_min", "z_max", "z_rms", "corr_xy", "corr_xz", "corr_yz", "mag_mean", "mag_std",
];

struct Moments {
    mean: f64,
    std: f64,
    mad: f64,
    min: f64,
    max: f64,
    rms: f64,
    constant: bool,
}

fn moments(values: &[f64]) -> Moments {
    let n = values.len() as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let rms = (values.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    if min == max {
        return Moments {
            mean: min,
            std: 0.0,
            mad: 0.0,
            min,
            max,
            rms,
            constant: true,
        };
    }
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let mad = values.iter().map(|v| (v - mean).abs()).sum::<f64>() / n;
    Moments {
        mean,
        std: var.sqrt(),
        mad,
        min,
        max,
        rms,
        constant: false,
    }
}

/// Pearson correlation; zero when either signal is constant.
fn correlation(a: &[f64], ma: &Moments, b: &[f64], mb: &Moments) -> f64 {
    if ma.constant || mb.constant || ma.std == 0.0 || mb.std == 0.0 {
        return 0.0;
    }
    let n = a.len() as f64;
    let cov = a.iter().zip(b).map(|(x, y)| (x - ma.mean) * (y - mb.mean)).sum::<f64>() / n;
    (cov / (ma.std * mb.std)).clamp(-1.0, 1.0)
}

/// Feature vector of one window of `[x, y, z]` samples. Panics on an empty window.
pub fn extract_window_features<T: Scalar>(window: &[[f64; 3]]) -> Vec<T> {
    assert!(!window.is_empty(), "feature extraction needs a nonempty window");
    let axes: [Vec<f64>; 3] = [0, 1, 2].map(|a| window.iter().map(|s| s[a]).collect());
    let m: Vec<Moments> = axes.iter().map(|v| moments(v)).collect();
    let mut out = Vec::with_capacity(N_WINDOW_FEATURES);
    for s in &m {
        out.extend([s.mean, s.std, s.mad, s.min, s.max, s.rms]);
    }
    out.push(correlation(&axes[0], &m[0], &axes[1], &m[1]));
    out.push(correlation(&axes[0], &m[0], &axes[2], &m[2]));
    out.push(correlation(&axes[1], &m[1], &axes[2], &m[2]));
    let mag: Vec<f64> = window
        .iter()
        .map(|s| (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt())
        .collect();
    let mm = moments(&mag);
    out.extend([mm.mean, mm.std]);
    out.into_iter().map(T::of).collect()
}
