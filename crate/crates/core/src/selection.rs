//! Silhouette-driven choice of the number of clusters.
//!
//! Every legal grid cell clusters the SAX documents with SPF at each `k`,
//! scores the partition with the silhouette of a feature representation and
//! keeps the best-scoring cell.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{znormalize, Dataset};
use crate::error::{Error, Result};
use crate::sax::{SaxEncoder, SaxParams, MAX_ALPHABET, MIN_ALPHABET};
use crate::spf::{Partition, SpfClusterer, SpfParams};
use crate::validity::{euclidean_distances, feature_distances, silhouette, DistanceMatrix};
use crate::vectorize::{bow_matrix, tfidf_matrix, FrequencyFilter};

pub const DEFAULT_WINDOWS: [usize; 12] = [3, 5, 8, 10, 12, 20, 30, 40, 50, 100, 200, 350];
pub const DEFAULT_ALPHABETS: [usize; 8] = [3, 4, 5, 6, 8, 9, 10, 20];
pub const DEFAULT_FILTERS: [(f64, f64); 4] = [(0.001, 0.99), (0.01, 0.9), (0.01, 0.99), (0.1, 0.9)];
pub const DEFAULT_WORD_LENGTH: usize = 5;

/// Which vectors the silhouette is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Raw,
    Bow,
    Tfidf,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Raw, Mode::Bow, Mode::Tfidf];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Raw => "raw",
            Mode::Bow => "bow",
            Mode::Tfidf => "tfidf",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "raw" => Ok(Mode::Raw),
            "bow" => Ok(Mode::Bow),
            "tfidf" | "tf-idf" => Ok(Mode::Tfidf),
            _ => Err(Error::Config(format!("unknown mode {s:?}"))),
        }
    }
}

/// How the TF-IDF sweep chooses SAX parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TfidfProtocol {
    /// Reuse the best SAX parameters of a BoW sweep and vary only the filters.
    Reuse,
    /// Sweep SAX parameters and filters jointly.
    Full,
}

/// Raw mode ignores windows, alphabets and word lengths: SPF runs once per
/// `k` on the SAX settings of the [`SpfParams`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub mode: Mode,
    pub k_min: usize,
    pub k_max: usize,
    pub windows: Vec<usize>,
    pub alphabets: Vec<usize>,
    pub word_lengths: Vec<usize>,
    pub filters: Vec<FrequencyFilter>,
    pub tfidf_protocol: TfidfProtocol,
}

impl SweepGrid {
    pub fn new(mode: Mode) -> Self {
        SweepGrid {
            mode,
            k_min: 2,
            k_max: 10,
            windows: DEFAULT_WINDOWS.to_vec(),
            alphabets: DEFAULT_ALPHABETS.to_vec(),
            word_lengths: vec![DEFAULT_WORD_LENGTH],
            filters: DEFAULT_FILTERS
                .iter()
                .map(|&(min_freq, max_freq)| FrequencyFilter { min_freq, max_freq })
                .collect(),
            tfidf_protocol: TfidfProtocol::Reuse,
        }
    }

    /// A grid with exactly one SAX setting and one filter.
    pub fn single(mode: Mode, sax: SaxParams, filter: FrequencyFilter) -> Self {
        SweepGrid {
            windows: vec![sax.window],
            alphabets: vec![sax.alphabet],
            word_lengths: vec![sax.word_length],
            filters: vec![filter],
            ..SweepGrid::new(mode)
        }
    }

    pub fn with_k_range(mut self, k_min: usize, k_max: usize) -> Self {
        self.k_min = k_min;
        self.k_max = k_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_min < 2 || self.k_min > self.k_max {
            return Err(Error::InvalidGrid(format!(
                "k range {}..={} must start at 2 or more and be non-empty",
                self.k_min, self.k_max
            )));
        }
        if self.mode == Mode::Raw {
            return Ok(());
        }
        if self.windows.is_empty() || self.alphabets.is_empty() || self.word_lengths.is_empty() {
            return Err(Error::InvalidGrid("empty parameter set".into()));
        }
        if let Some(a) = self
            .alphabets
            .iter()
            .find(|a| !(MIN_ALPHABET..=MAX_ALPHABET).contains(a))
        {
            return Err(Error::InvalidGrid(format!("alphabet size {a} outside [2, 26]")));
        }
        if self.windows.contains(&0) || self.word_lengths.contains(&0) {
            return Err(Error::InvalidGrid("window and word length must be positive".into()));
        }
        if self.mode == Mode::Tfidf {
            if self.filters.is_empty() {
                return Err(Error::InvalidGrid("no frequency filters".into()));
            }
            for f in &self.filters {
                FrequencyFilter::new(f.min_freq, f.max_freq)?;
            }
        }
        Ok(())
    }

    /// SAX settings that fit the dataset, sorted by (window, alphabet, word
    /// length). Settings that do not fit are logged and dropped.
    pub fn legal_sax(&self, min_length: usize) -> Vec<SaxParams> {
        let mut windows = self.windows.clone();
        windows.sort_unstable();
        windows.dedup();
        let mut alphabets = self.alphabets.clone();
        alphabets.sort_unstable();
        alphabets.dedup();
        let mut lengths = self.word_lengths.clone();
        lengths.sort_unstable();
        lengths.dedup();
        let mut out = Vec::new();
        for &window in &windows {
            if window > min_length {
                warn!("skipping window {window}: shortest series has length {min_length}");
                continue;
            }
            for &word_length in &lengths {
                if word_length > window {
                    warn!("skipping window {window}: word length {word_length} is longer");
                    continue;
                }
                for &alphabet in &alphabets {
                    out.push(SaxParams {
                        window,
                        word_length,
                        alphabet,
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sax: Option<SaxParams>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub filter: Option<FrequencyFilter>,
    pub silhouette: f64,
    pub partition: Partition,
}

impl SweepCell {
    // Position used to break silhouette ties: smaller k, then smaller window,
    // then smaller alphabet, then word length, then filter bounds.
    fn tie_key(&self) -> (usize, usize, usize, usize, f64, f64) {
        let (w, a, l) = self
            .sax
            .map_or((0, 0, 0), |s| (s.window, s.alphabet, s.word_length));
        let (lo, hi) = self.filter.map_or((0.0, 0.0), |f| (f.min_freq, f.max_freq));
        (self.k, w, a, l, lo, hi)
    }
}

/// Index of the best cell: highest silhouette, ties by [`SweepCell::tie_key`].
fn argmax(cells: &[SweepCell]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, c) in cells.iter().enumerate() {
        best = match best {
            None => Some(i),
            Some(b) => {
                let cur = &cells[b];
                let better = c.silhouette > cur.silhouette
                    || (c.silhouette == cur.silhouette
                        && c.tie_key().partial_cmp(&cur.tie_key()) == Some(std::cmp::Ordering::Less));
                Some(if better { i } else { b })
            }
        };
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Correct,
    Close,
    Wrong,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Correct => "Correct",
            Verdict::Close => "Close",
            Verdict::Wrong => "Wrong",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Correct" => Ok(Verdict::Correct),
            "Close" => Ok(Verdict::Close),
            "Wrong" => Ok(Verdict::Wrong),
            _ => Err(Error::Config(format!("unknown verdict {s:?}"))),
        }
    }
}

/// Correct on an exact match, Close when off by one, Wrong otherwise.
pub fn verdict(predicted_k: usize, true_k: usize) -> Verdict {
    match predicted_k.abs_diff(true_k) {
        0 => Verdict::Correct,
        1 => Verdict::Close,
        _ => Verdict::Wrong,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictSummary {
    pub correct_pct: f64,
    pub close_pct: f64,
    pub wrong_pct: f64,
}

pub fn summarize(verdicts: &[Verdict]) -> Result<VerdictSummary> {
    if verdicts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = verdicts.len() as f64;
    let pct = |v: Verdict| verdicts.iter().filter(|&&x| x == v).count() as f64 * 100.0 / n;
    Ok(VerdictSummary {
        correct_pct: pct(Verdict::Correct),
        close_pct: pct(Verdict::Close),
        wrong_pct: pct(Verdict::Wrong),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub dataset: String,
    pub mode: Mode,
    pub grid: SweepGrid,
    pub spf: SpfParams,
    pub cells: Vec<SweepCell>,
    pub best: SweepCell,
    pub predicted_k: usize,
    pub true_k: Option<usize>,
    pub verdict: Option<Verdict>,
}

impl SelectionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: SelectionReport =
            serde_json::from_str(text).map_err(|e| Error::MalformedReport(e.to_string()))?;
        if report.cells.is_empty() || report.best.k != report.predicted_k {
            return Err(Error::MalformedReport("inconsistent best cell".into()));
        }
        Ok(report)
    }

    /// One row in the column order of the published result tables.
    pub fn to_csv(&self) -> String {
        let actual = self.true_k.map_or(String::new(), |k| k.to_string());
        let remark = self.verdict.map_or("", Verdict::as_str);
        let mut out = String::new();
        match self.mode {
            Mode::Raw => {
                out.push_str("dataset,actual_k,predicted_k,verdict\n");
                let _ = writeln!(out, "{},{actual},{},{remark}", self.dataset, self.predicted_k);
            }
            Mode::Bow => {
                let sax = self.best.sax.expect("bow cells carry sax params");
                out.push_str("dataset,window,alphabet,actual_k,predicted_k,verdict\n");
                let _ = writeln!(
                    out,
                    "{},{},{},{actual},{},{remark}",
                    self.dataset, sax.window, sax.alphabet, self.predicted_k
                );
            }
            Mode::Tfidf => {
                let sax = self.best.sax.expect("tfidf cells carry sax params");
                let f = self.best.filter.expect("tfidf cells carry a filter");
                out.push_str("dataset,window,alphabet,min_freq,max_freq,actual_k,predicted_k,verdict\n");
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{actual},{},{remark}",
                    self.dataset, sax.window, sax.alphabet, f.min_freq, f.max_freq, self.predicted_k
                );
            }
        }
        out
    }
}

fn check_k_range(ds: &Dataset, grid: &SweepGrid) -> Result<()> {
    if grid.k_max > ds.len() {
        return Err(Error::InvalidK {
            k: grid.k_max,
            n: ds.len(),
        });
    }
    Ok(())
}

/// Partitions for every `k` of the grid, clustering with `sax`.
fn partitions(
    ds: &Dataset,
    sax: SaxParams,
    grid: &SweepGrid,
    spf: &SpfParams,
) -> Result<Vec<Partition>> {
    let docs = SaxEncoder::new(sax)?.documents(ds)?;
    let clusterer = SpfClusterer::new(&docs, &spf.with_sax(sax))?;
    (grid.k_min..=grid.k_max).map(|k| clusterer.cluster(k)).collect()
}

fn score(dm: &DistanceMatrix, p: &Partition) -> Result<f64> {
    // a forest that cannot separate the data at this k still yields a
    // partition; fewer than two clusters scores as the neutral value 0
    if p.k() < 2 {
        return Ok(0.0);
    }
    Ok(silhouette(dm, p)?.mean)
}

fn raw_cells(ds: &Dataset, grid: &SweepGrid, spf: &SpfParams) -> Result<Vec<SweepCell>> {
    if !ds.equal_lengths() {
        return Err(Error::UnequalLengths);
    }
    let rows: Vec<Vec<f64>> = ds
        .series()
        .iter()
        .map(|s| znormalize(s.values(), 1e-8))
        .collect();
    let dm = euclidean_distances(&rows)?;
    let sax = spf.sax;
    if sax.window > ds.min_length() {
        return Err(Error::WindowTooLong {
            series: ds.series()[0].id().to_string(),
            window: sax.window,
            length: ds.min_length(),
        });
    }
    let parts = partitions(ds, sax, grid, spf)?;
    (grid.k_min..=grid.k_max)
        .zip(parts)
        .map(|(k, partition)| {
            Ok(SweepCell {
                k,
                sax: None,
                filter: None,
                silhouette: score(&dm, &partition)?,
                partition,
            })
        })
        .collect()
}

fn sax_cells(
    ds: &Dataset,
    grid: &SweepGrid,
    spf: &SpfParams,
    sax_list: &[SaxParams],
    mode: Mode,
) -> Result<Vec<SweepCell>> {
    let per_sax: Vec<Vec<SweepCell>> = sax_list
        .par_iter()
        .map(|&sax| -> Result<Vec<SweepCell>> {
            let docs = SaxEncoder::new(sax)?.documents(ds)?;
            let clusterer = SpfClusterer::new(&docs, &spf.with_sax(sax))?;
            let parts: Vec<Partition> = (grid.k_min..=grid.k_max)
                .map(|k| clusterer.cluster(k))
                .collect::<Result<_>>()?;
            let mut cells = Vec::new();
            if mode == Mode::Bow {
                let dm = feature_distances(&bow_matrix(&docs)?);
                for (k, p) in (grid.k_min..).zip(&parts) {
                    cells.push(SweepCell {
                        k,
                        sax: Some(sax),
                        filter: None,
                        silhouette: score(&dm, p)?,
                        partition: p.clone(),
                    });
                }
                return Ok(cells);
            }
            for filter in &grid.filters {
                let features = match tfidf_matrix(&docs, filter) {
                    Ok(f) => f,
                    Err(Error::EmptyVocabulary) => {
                        warn!(
                            "skipping filter [{}, {}] at window {} alphabet {}: empty vocabulary",
                            filter.min_freq, filter.max_freq, sax.window, sax.alphabet
                        );
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let dm = feature_distances(&features);
                for (k, p) in (grid.k_min..).zip(&parts) {
                    cells.push(SweepCell {
                        k,
                        sax: Some(sax),
                        filter: Some(*filter),
                        silhouette: score(&dm, p)?,
                        partition: p.clone(),
                    });
                }
            }
            Ok(cells)
        })
        .collect::<Result<_>>()?;
    Ok(per_sax.into_iter().flatten().collect())
}

/// Sweeps the grid and picks the cell with the highest mean silhouette.
pub fn run_sweep(ds: &Dataset, grid: &SweepGrid, spf: &SpfParams) -> Result<SelectionReport> {
    grid.validate()?;
    spf.validate()?;
    check_k_range(ds, grid)?;
    let cells = match grid.mode {
        Mode::Raw => raw_cells(ds, grid, spf)?,
        Mode::Bow => {
            let sax = grid.legal_sax(ds.min_length());
            sax_cells(ds, grid, spf, &sax, Mode::Bow)?
        }
        Mode::Tfidf => {
            let sax = match grid.tfidf_protocol {
                TfidfProtocol::Full => grid.legal_sax(ds.min_length()),
                TfidfProtocol::Reuse => {
                    let bow = SweepGrid {
                        mode: Mode::Bow,
                        ..grid.clone()
                    };
                    if bow.legal_sax(ds.min_length()).is_empty() {
                        Vec::new()
                    } else {
                        let best = run_sweep(ds, &bow, spf)?.best;
                        vec![best.sax.expect("bow cells carry sax params")]
                    }
                }
            };
            sax_cells(ds, grid, spf, &sax, Mode::Tfidf)?
        }
    };
    let best = argmax(&cells)
        .ok_or_else(|| Error::InvalidGrid("no legal grid cell for this dataset".into()))?;
    let best = cells[best].clone();
    let true_k = ds.true_k();
    Ok(SelectionReport {
        dataset: ds.name().to_string(),
        mode: grid.mode,
        grid: grid.clone(),
        spf: *spf,
        predicted_k: best.k,
        verdict: true_k.map(|t| verdict(best.k, t)),
        true_k,
        best,
        cells,
    })
}
