//! Time-series containers, UCR text ingestion and z-normalization.
//!
//! UCR archive files hold one series per row: the class label first, then the
//! values, separated by tabs (2018 archive) or commas (older exports).
//! Varying-length series in the 2018 archive are padded with trailing `NaN`
//! tokens; those are stripped the same way as trailing empty fields.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flat-window guard used by [`znormalize`] when no epsilon is supplied.
pub const DEFAULT_EPSILON: f64 = 1e-8;

/// Labels within this distance of an integer are accepted as that integer.
const LABEL_TOLERANCE: f64 = 1e-9;

/// One ordered real-valued sequence with an optional ground-truth class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    id: String,
    values: Vec<f64>,
    label: Option<i64>,
}

impl TimeSeries {
    pub fn new(id: impl Into<String>, values: Vec<f64>, label: Option<i64>) -> Result<Self> {
        let id = id.into();
        if values.len() < 2 {
            return Err(Error::Config(format!(
                "series {id} has {} values, need at least 2",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Config(format!(
                "series {id} has a non-finite value at position {pos}"
            )));
        }
        Ok(TimeSeries { id, values, label })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Ground-truth class. Only evaluation code should look at this.
    pub fn label(&self) -> Option<i64> {
        self.label
    }
}

/// A named collection of at least two series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    name: String,
    series: Vec<TimeSeries>,
    true_k: Option<usize>,
}

impl Dataset {
    /// Builds a dataset; `true_k` is derived from the labels when every
    /// series carries one and at least two classes are present.
    pub fn new(name: impl Into<String>, series: Vec<TimeSeries>) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::NoSeries);
        }
        if series.len() < 2 {
            return Err(Error::TooFewSeries(series.len()));
        }
        let true_k = if series.iter().all(|s| s.label.is_some()) {
            let distinct: BTreeSet<i64> = series.iter().filter_map(|s| s.label).collect();
            (distinct.len() >= 2).then_some(distinct.len())
        } else {
            None
        };
        Ok(Dataset {
            name: name.into(),
            series,
            true_k,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn true_k(&self) -> Option<usize> {
        self.true_k
    }

    pub fn labels(&self) -> Option<Vec<i64>> {
        self.series.iter().map(|s| s.label).collect()
    }

    pub fn min_length(&self) -> usize {
        self.series.iter().map(TimeSeries::len).min().unwrap_or(0)
    }

    pub fn equal_lengths(&self) -> bool {
        let first = self.series[0].len();
        self.series.iter().all(|s| s.len() == first)
    }

    /// Concatenates two datasets (used to merge UCR train and test splits).
    pub fn merge(name: impl Into<String>, a: Dataset, b: Dataset) -> Result<Self> {
        let mut series = a.series;
        series.extend(b.series);
        Dataset::new(name, series)
    }
}

/// A contiguous window of one series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subsequence<'a> {
    pub source_id: &'a str,
    pub start: usize,
    pub values: &'a [f64],
}

/// Field separator of a UCR file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    Tab,
    Comma,
    /// Tab if the first non-empty row contains one, otherwise comma.
    #[default]
    Auto,
}

impl Delimiter {
    fn resolve(self, text: &str) -> char {
        match self {
            Delimiter::Tab => '\t',
            Delimiter::Comma => ',',
            Delimiter::Auto => {
                let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
                if first.contains('\t') {
                    '\t'
                } else {
                    ','
                }
            }
        }
    }
}

/// Which part of a UCR dataset to load.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    #[default]
    Train,
    Test,
    Merge,
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            "merge" => Ok(Split::Merge),
            other => Err(Error::Config(format!("unknown split {other:?}"))),
        }
    }
}

/// Reads a UCR-format file. The dataset is named after the file stem with a
/// trailing `_TRAIN`/`_TEST` removed.
pub fn load_ucr(path: impl AsRef<Path>, delimiter: Delimiter) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("dataset");
    let name = stem
        .strip_suffix("_TRAIN")
        .or_else(|| stem.strip_suffix("_TEST"))
        .unwrap_or(stem);
    parse_ucr(name, &text, delimiter)
}

/// Parses UCR text held in memory. Row indices in errors are 0-based over
/// all lines, blank lines included.
pub fn parse_ucr(name: &str, text: &str, delimiter: Delimiter) -> Result<Dataset> {
    let sep = delimiter.resolve(text);
    let mut series = Vec::new();
    for (row, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut tokens: Vec<&str> = line.split(sep).map(str::trim).collect();
        while tokens
            .last()
            .is_some_and(|t| t.is_empty() || t.eq_ignore_ascii_case("nan"))
        {
            tokens.pop();
        }
        let mut numbers = Vec::with_capacity(tokens.len());
        for (col, tok) in tokens.iter().enumerate() {
            let v: f64 = tok.parse().map_err(|_| Error::BadRow {
                row,
                reason: format!("non-numeric token {tok:?} in column {col}"),
            })?;
            numbers.push(v);
        }
        if numbers.len() < 3 {
            return Err(Error::BadRow {
                row,
                reason: format!(
                    "need a label and at least 2 values, found {} numeric fields",
                    numbers.len()
                ),
            });
        }
        let label = parse_label(numbers[0]).ok_or_else(|| Error::BadRow {
            row,
            reason: format!("label {} is not an integer", numbers[0]),
        })?;
        let values = numbers.split_off(1);
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::BadRow {
                row,
                reason: format!("non-finite value at position {pos}"),
            });
        }
        series.push(TimeSeries {
            id: format!("{name}:{}", series.len()),
            values,
            label: Some(label),
        });
    }
    match series.len() {
        0 => Err(Error::NoSeries),
        1 => Err(Error::TooFewSeries(1)),
        _ => Dataset::new(name, series),
    }
}

fn parse_label(v: f64) -> Option<i64> {
    let r = v.round();
    ((v - r).abs() <= LABEL_TOLERANCE && r.abs() < i64::MAX as f64).then_some(r as i64)
}

/// Serializes a labeled dataset back to tab-separated UCR text. Values use
/// the shortest representation that parses back to the same `f64`.
pub fn to_ucr_string(ds: &Dataset) -> String {
    let mut out = String::new();
    for s in &ds.series {
        let _ = write!(out, "{}", s.label.unwrap_or(0));
        for v in &s.values {
            let _ = write!(out, "\t{v}");
        }
        out.push('\n');
    }
    out
}

/// Locates `<name>_TRAIN.tsv` / `<name>_TEST.tsv` (or `.txt`/`.csv`) under
/// `root`, either directly or inside a `<name>/` folder as laid out by the
/// 2018 archive.
pub fn find_split_file(root: &Path, name: &str, which: &str) -> Option<PathBuf> {
    let dirs = [root.join(name), root.to_path_buf()];
    for dir in &dirs {
        for ext in ["tsv", "txt", "csv"] {
            let p = dir.join(format!("{name}_{which}.{ext}"));
            if p.is_file() {
                return Some(p);
            }
        }
        let bare = dir.join(format!("{name}_{which}"));
        if bare.is_file() {
            return Some(bare);
        }
    }
    None
}

/// Loads a named dataset from an archive root for the requested split.
pub fn load_named(root: &Path, name: &str, split: Split) -> Result<Dataset> {
    let load = |which: &str| -> Result<Dataset> {
        let path = find_split_file(root, name, which)
            .ok_or_else(|| Error::DatasetNotFound(format!("{name} ({which}) under {}", root.display())))?;
        let mut ds = load_ucr(&path, Delimiter::Auto)?;
        ds.name = name.to_string();
        Ok(ds)
    };
    match split {
        Split::Train => load("TRAIN"),
        Split::Test => load("TEST"),
        Split::Merge => Dataset::merge(name, load("TRAIN")?, load("TEST")?),
    }
}

/// Shifts to zero mean and scales to unit population standard deviation.
/// Sequences whose deviation is at most `epsilon` become all zeros.
pub fn znormalize(values: &[f64], epsilon: f64) -> Vec<f64> {
    let mut out = values.to_vec();
    znormalize_in_place(&mut out, epsilon);
    out
}

pub(crate) fn znormalize_in_place(values: &mut [f64], epsilon: f64) {
    if values.is_empty() {
        return;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = var.sqrt();
    if sd > epsilon {
        values.iter_mut().for_each(|v| *v = (*v - mean) / sd);
    } else {
        values.iter_mut().for_each(|v| *v = 0.0);
    }
}

/// All windows of length `window`, starting at 0, 1, ..., m - window.
pub fn subsequences(series: &TimeSeries, window: usize) -> Result<Vec<Subsequence<'_>>> {
    let m = series.len();
    if window == 0 || window > m {
        return Err(Error::WindowTooLong {
            series: series.id.clone(),
            window,
            length: m,
        });
    }
    Ok(series
        .values
        .windows(window)
        .enumerate()
        .map(|(start, values)| Subsequence {
            source_id: &series.id,
            start,
            values,
        })
        .collect())
}
