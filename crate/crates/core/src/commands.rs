//! The operations behind the `spfk` binary, as library calls.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::data::{load_named, load_ucr, Dataset, Delimiter, Split};
use crate::error::{Error, Result};
use crate::fixtures::{load_fixture, TableId};
use crate::plot::{comparison_svg, silhouette_svg};
use crate::selection::{run_sweep, Mode, SelectionReport, SweepGrid, Verdict};
use crate::spf::SpfParams;

pub const DATA_DIR_ENV: &str = "SPFK_DATA_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// UCR files, or dataset names looked up under `data_dir`.
    pub data: Vec<String>,
    pub data_dir: Option<PathBuf>,
    pub split: Split,
    /// Grid for `select`; `benchmark` reuses it with each mode in turn.
    pub grid: SweepGrid,
    pub spf: SpfParams,
    pub out: PathBuf,
    pub formats: Vec<Format>,
}

impl RunConfig {
    pub fn new(mode: Mode) -> Self {
        RunConfig {
            data: Vec::new(),
            data_dir: std::env::var_os(DATA_DIR_ENV).map(PathBuf::from),
            split: Split::Train,
            grid: SweepGrid::new(mode),
            spf: SpfParams::default(),
            out: PathBuf::from("."),
            formats: vec![Format::Json, Format::Csv],
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.spf.validate()?;
        if self.formats.is_empty() {
            return Err(Error::Config("no output format".into()));
        }
        if self.out.exists() && !self.out.is_dir() {
            return Err(Error::Config(format!("{} is not a directory", self.out.display())));
        }
        Ok(())
    }

    /// Loads `spec` as a file if one exists at that path, otherwise as a
    /// dataset name under the data directory.
    pub fn load(&self, spec: &str) -> Result<Dataset> {
        let path = Path::new(spec);
        if path.is_file() {
            return load_ucr(path, Delimiter::Auto);
        }
        match &self.data_dir {
            Some(root) => load_named(root, spec, self.split),
            None => Err(Error::DatasetNotFound(format!(
                "{spec} (not a file, and {DATA_DIR_ENV} / --data-dir is unset)"
            ))),
        }
    }
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectOutcome {
    pub report: SelectionReport,
    pub files: Vec<PathBuf>,
}

impl SelectOutcome {
    /// `dataset=<name> mode=<mode> predicted_k=<k> silhouette=<s> verdict=<v|n/a>`
    pub fn summary_line(&self) -> String {
        let r = &self.report;
        format!(
            "dataset={} mode={} predicted_k={} silhouette={:.6} verdict={}",
            r.dataset,
            r.mode,
            r.predicted_k,
            r.best.silhouette,
            r.verdict.map_or("n/a", Verdict::as_str)
        )
    }
}

pub fn report_stem(dataset: &str, mode: Mode) -> String {
    format!("{dataset}.{mode}.report")
}

fn write_report(report: &SelectionReport, out: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    let stem = report_stem(&report.dataset, report.mode);
    let mut files = Vec::new();
    for f in formats {
        let (ext, body) = match f {
            Format::Json => ("json", report.to_json()),
            Format::Csv => ("csv", report.to_csv()),
            Format::Svg => ("svg", silhouette_svg(report)),
        };
        let path = out.join(format!("{stem}.{ext}"));
        write_atomic(&path, &body)?;
        files.push(path);
    }
    Ok(files)
}

/// Sweeps every dataset of the config and writes one report per dataset.
pub fn cmd_select(config: &RunConfig) -> Result<Vec<SelectOutcome>> {
    config.validate()?;
    if config.data.is_empty() {
        return Err(Error::Config("no dataset given".into()));
    }
    config
        .data
        .iter()
        .map(|spec| {
            let ds = config.load(spec)?;
            let report = run_sweep(&ds, &config.grid, &config.spf)?;
            let files = write_report(&report, &config.out, &config.formats)?;
            Ok(SelectOutcome { report, files })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub dataset: String,
    pub actual_k: Option<usize>,
    /// Predicted `k` per mode, in `Mode::ALL` order; `None` when the mode
    /// could not run on this dataset.
    pub predicted: [Option<usize>; 3],
    pub verdicts: [Option<Verdict>; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOutcome {
    pub rows: Vec<BenchmarkRow>,
    pub skipped: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl BenchmarkOutcome {
    pub fn correct_count(&self, mode: Mode) -> usize {
        let m = Mode::ALL.iter().position(|&x| x == mode).unwrap();
        self.rows
            .iter()
            .filter(|r| r.verdicts[m] == Some(Verdict::Correct))
            .count()
    }
}

pub fn benchmark_csv(rows: &[BenchmarkRow]) -> String {
    let mut out = String::from("dataset,actual_k");
    for m in Mode::ALL {
        let _ = write!(out, ",{m}_predicted_k,{m}_verdict");
    }
    out.push('\n');
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in rows {
        let _ = write!(out, "{},{}", r.dataset, opt(r.actual_k.map(|k| k.to_string())));
        for m in 0..3 {
            let _ = write!(
                out,
                ",{},{}",
                opt(r.predicted[m].map(|k| k.to_string())),
                opt(r.verdicts[m].map(|v| v.to_string()))
            );
        }
        out.push('\n');
    }
    out
}

/// Runs all three modes over the fixture datasets that are available
/// locally (restricted to `config.data` when it is non-empty).
pub fn cmd_benchmark(config: &RunConfig, table: TableId) -> Result<BenchmarkOutcome> {
    config.validate()?;
    let names: Vec<String> = if config.data.is_empty() {
        load_fixture(table).into_iter().map(|r| r.dataset).collect()
    } else {
        config.data.clone()
    };
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for name in &names {
        let ds = match config.load(name) {
            Ok(ds) => ds,
            Err(e) => {
                warn!("skipping {name}: {e}");
                skipped.push(name.clone());
                continue;
            }
        };
        let mut row = BenchmarkRow {
            dataset: ds.name().to_string(),
            actual_k: ds.true_k(),
            predicted: [None; 3],
            verdicts: [None; 3],
        };
        for (m, mode) in Mode::ALL.into_iter().enumerate() {
            let grid = SweepGrid {
                mode,
                ..config.grid.clone()
            };
            match run_sweep(&ds, &grid, &config.spf) {
                Ok(r) => {
                    row.predicted[m] = Some(r.predicted_k);
                    row.verdicts[m] = r.verdict;
                }
                Err(e) => warn!("{name} in {mode} mode: {e}"),
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::DatasetNotFound(format!(
            "none of the {} table {table} datasets is available locally",
            names.len()
        )));
    }
    let groups: Vec<(String, Vec<Verdict>)> = Mode::ALL
        .iter()
        .enumerate()
        .map(|(m, mode)| (mode.to_string(), rows.iter().filter_map(|r| r.verdicts[m]).collect()))
        .collect();
    let csv_path = config.out.join(format!("benchmark.table{table}.csv"));
    let svg_path = config.out.join(format!("benchmark.table{table}.svg"));
    write_atomic(&csv_path, &benchmark_csv(&rows))?;
    write_atomic(&svg_path, &comparison_svg(&groups))?;
    Ok(BenchmarkOutcome {
        rows,
        skipped,
        files: vec![csv_path, svg_path],
    })
}

/// Renders a saved JSON report as a silhouette-vs-k chart. Without `out`
/// the SVG goes next to the report.
pub fn cmd_plot_silhouette(report: &Path, out: Option<&Path>) -> Result<PathBuf> {
    let text = fs::read_to_string(report).map_err(|e| Error::io(report, e))?;
    let parsed = SelectionReport::from_json(&text)?;
    let target = match out {
        Some(p) => p.to_path_buf(),
        None => report.with_extension("svg"),
    };
    write_atomic(&target, &silhouette_svg(&parsed))?;
    Ok(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::to_ucr_string;
    use crate::synthetic::{generate_synthetic, SyntheticSpec};

    fn small_config(dir: &Path) -> RunConfig {
        let ds = generate_synthetic(&SyntheticSpec {
            per_class: 5,
            length: 64,
            ..SyntheticSpec::three_class(2)
        })
        .unwrap();
        let file = dir.join("Toy_TRAIN.tsv");
        fs::write(&file, to_ucr_string(&ds)).unwrap();
        RunConfig {
            data: vec![file.display().to_string()],
            data_dir: None,
            grid: SweepGrid {
                windows: vec![16],
                alphabets: vec![4],
                ..SweepGrid::new(Mode::Bow)
            }
            .with_k_range(2, 4),
            spf: SpfParams::default().with_ensemble_size(20),
            out: dir.join("out"),
            formats: vec![Format::Json, Format::Csv, Format::Svg],
            split: Split::Train,
        }
    }

    #[test]
    fn select_writes_reports() {
        let dir = tempfile::tempdir().unwrap();
        let config = small_config(dir.path());
        let out = cmd_select(&config).unwrap();
        assert_eq!(out.len(), 1);
        let names: Vec<String> = out[0]
            .files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        assert_eq!(names, ["Toy.bow.report.json", "Toy.bow.report.csv", "Toy.bow.report.svg"]);
        let line = out[0].summary_line();
        assert!(line.starts_with("dataset=Toy mode=bow predicted_k="), "{line}");
        assert!(line.contains(" verdict="));
        let svg = cmd_plot_silhouette(&out[0].files[0], Some(&dir.path().join("p.svg"))).unwrap();
        assert!(fs::read_to_string(svg).unwrap().contains("class=\"best\""));
    }

    #[test]
    fn malformed_report_exits_2() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.json");
        fs::write(&bad, "{\"dataset\": 3}").unwrap();
        assert_eq!(cmd_plot_silhouette(&bad, None).unwrap_err().exit_code(), 2);
        let missing = dir.path().join("missing.json");
        assert_eq!(cmd_plot_silhouette(&missing, None).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn benchmark_without_data_fails() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig {
            data_dir: Some(dir.path().to_path_buf()),
            out: dir.path().join("out"),
            ..RunConfig::new(Mode::Bow)
        };
        let err = cmd_benchmark(&config, TableId::IV).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn benchmark_shape() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = small_config(dir.path());
        config.data.push("NotThere".into());
        let out = cmd_benchmark(&config, TableId::IV).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert_eq!(out.skipped, vec!["NotThere".to_string()]);
        let csv = fs::read_to_string(&out.files[0]).unwrap();
        assert_eq!(
            csv.lines().next().unwrap(),
            "dataset,actual_k,raw_predicted_k,raw_verdict,bow_predicted_k,bow_verdict,tfidf_predicted_k,tfidf_verdict"
        );
        assert_eq!(csv.lines().count(), 2);
    }
}
