//! WISDM v1.1 raw accelerometer stream: parsing, windowing and featurization.

use std::fmt;
use std::fs;
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use super::features::{extract_window_features, N_WINDOW_FEATURES, WINDOW_FEATURE_NAMES};
use super::{LabeledDataset, Source};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Share of malformed records above which loading fails.
pub const MAX_MALFORMED_FRACTION: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Activity {
    Walking,
    Jogging,
    Upstairs,
    Downstairs,
    Sitting,
    Standing,
}

impl Activity {
    pub const ALL: [Activity; 6] = [
        Activity::Walking,
        Activity::Jogging,
        Activity::Upstairs,
        Activity::Downstairs,
        Activity::Sitting,
        Activity::Standing,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name().eq_ignore_ascii_case(s.trim()))
    }

    pub fn name(self) -> &'static str {
        match self {
            Activity::Walking => "Walking",
            Activity::Jogging => "Jogging",
            Activity::Upstairs => "Upstairs",
            Activity::Downstairs => "Downstairs",
            Activity::Sitting => "Sitting",
            Activity::Standing => "Standing",
        }
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WisdmRecord {
    pub user: u32,
    pub activity: Activity,
    pub timestamp: i64,
    pub xyz: [f64; 3],
}

/// Parsed records plus counts of what was skipped.
#[derive(Debug, Clone, Default)]
pub struct WisdmLoad {
    pub records: Vec<WisdmRecord>,
    /// Records that failed to parse (missing or invalid fields).
    pub malformed: usize,
    /// Well-formed records whose activity is outside the six used classes.
    pub other_activity: usize,
}

enum Parsed {
    Record(WisdmRecord),
    OtherActivity,
}

fn parse_record(text: &str) -> Option<Parsed> {
    let fields: Vec<&str> = text.split(',').map(str::trim).collect();
    if fields.len() != 6 {
        return None;
    }
    let user = fields[0].parse().ok()?;
    let timestamp = fields[2].parse().ok()?;
    let mut xyz = [0.0; 3];
    for (v, f) in xyz.iter_mut().zip(&fields[3..]) {
        *v = f.parse::<f64>().ok().filter(|v| v.is_finite())?;
    }
    if fields[1].is_empty() {
        return None;
    }
    Some(match Activity::parse(fields[1]) {
        Some(activity) => Parsed::Record(WisdmRecord {
            user,
            activity,
            timestamp,
            xyz,
        }),
        None => Parsed::OtherActivity,
    })
}

/// Parses `user,activity,timestamp,x,y,z;` records.
///
/// Blank lines are ignored; a line may hold several `;`-terminated records.
/// Malformed records are skipped and counted, and loading fails when they
/// exceed [`MAX_MALFORMED_FRACTION`] of all records.
pub fn parse_wisdm(text: &str, path: &Path) -> Result<WisdmLoad> {
    let mut load = WisdmLoad::default();
    let mut total = 0usize;
    let mut first_bad = None;
    for (i, line) in text.lines().enumerate() {
        for piece in line.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            total += 1;
            match parse_record(piece) {
                Some(Parsed::Record(r)) => load.records.push(r),
                Some(Parsed::OtherActivity) => load.other_activity += 1,
                None => {
                    load.malformed += 1;
                    first_bad.get_or_insert(i + 1);
                }
            }
        }
    }
    if load.malformed > 0 {
        warn!(
            "{}: skipped {} malformed record(s), first at line {}",
            path.display(),
            load.malformed,
            first_bad.unwrap_or(0)
        );
    }
    if total > 0 && load.malformed as f64 > MAX_MALFORMED_FRACTION * total as f64 {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: first_bad.unwrap_or(0),
            message: format!("{} of {} records malformed", load.malformed, total),
        });
    }
    Ok(load)
}

pub fn load_wisdm_raw(path: impl AsRef<Path>) -> Result<WisdmLoad> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_wisdm(&String::from_utf8_lossy(&bytes), path)
}

/// Stable sort by `(user, timestamp)`.
pub fn sort_records(records: &mut [WisdmRecord]) {
    records.sort_by_key(|r| (r.user, r.timestamp));
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub length: usize,
    pub overlap: f64,
}

impl Default for WindowSpec {
    /// 200 samples (10 s at 20 Hz), 50% overlap.
    fn default() -> Self {
        Self {
            length: 200,
            overlap: 0.5,
        }
    }
}

impl WindowSpec {
    pub fn validate(&self) -> Result<()> {
        if self.length < 2 {
            return Err(Error::config("window length must be at least 2"));
        }
        if !(0.0..1.0).contains(&self.overlap) {
            return Err(Error::config("window overlap must lie in [0, 1)"));
        }
        Ok(())
    }

    pub fn stride(&self) -> usize {
        ((self.length as f64 * (1.0 - self.overlap)).floor() as usize).max(1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WisdmWindow {
    pub user: u32,
    pub activity: Activity,
    pub samples: Vec<[f64; 3]>,
}

/// Sliding windows over each maximal run of consecutive records sharing
/// `(user, activity)`. Runs shorter than the window contribute nothing.
pub fn window_wisdm(records: &[WisdmRecord], spec: &WindowSpec) -> Result<Vec<WisdmWindow>> {
    spec.validate()?;
    let stride = spec.stride();
    let mut windows = Vec::new();
    let mut start = 0;
    while start < records.len() {
        let key = (records[start].user, records[start].activity);
        let mut end = start + 1;
        while end < records.len() && (records[end].user, records[end].activity) == key {
            end += 1;
        }
        let run = &records[start..end];
        let mut offset = 0;
        while offset + spec.length <= run.len() {
            windows.push(WisdmWindow {
                user: key.0,
                activity: key.1,
                samples: run[offset..offset + spec.length].iter().map(|r| r.xyz).collect(),
            });
            offset += stride;
        }
        start = end;
    }
    Ok(windows)
}

/// One featurized row per window, labelled by activity.
pub fn windows_to_dataset<T: Scalar>(windows: &[WisdmWindow]) -> Result<LabeledDataset<T>> {
    let mut features = Vec::with_capacity(windows.len() * N_WINDOW_FEATURES);
    for w in windows {
        features.extend(extract_window_features::<T>(&w.samples));
    }
    LabeledDataset::new(
        features,
        N_WINDOW_FEATURES,
        windows.iter().map(|w| w.activity.index()).collect(),
        Activity::ALL.iter().map(|a| a.name().to_lowercase()).collect(),
        WINDOW_FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        Source::Wisdm,
    )
}

/// Load, sort, window and featurize a raw WISDM file.
pub fn load_wisdm<T: Scalar>(path: impl AsRef<Path>, spec: &WindowSpec) -> Result<LabeledDataset<T>> {
    let mut load = load_wisdm_raw(path)?;
    if load.other_activity > 0 {
        warn!("skipped {} record(s) with other activities", load.other_activity);
    }
    sort_records(&mut load.records);
    let windows = window_wisdm(&load.records, spec)?;
    if windows.is_empty() {
        return Err(Error::data("no complete windows in WISDM data"));
    }
    windows_to_dataset(&windows)
}
