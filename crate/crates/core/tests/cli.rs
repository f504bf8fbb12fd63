use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use spfk::commands::{cmd_select, Format, RunConfig};
use spfk::data::to_ucr_string;
use spfk::selection::{Mode, SelectionReport, SweepGrid};
use spfk::spf::SpfParams;
use spfk::synthetic::{generate_synthetic, SyntheticSpec};

fn spfk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spfk"))
        .args(args)
        .env_remove("SPFK_DATA_DIR")
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn sines(dir: &Path) -> PathBuf {
    let ds = generate_synthetic(&SyntheticSpec {
        per_class: 8,
        ..SyntheticSpec::three_class(11)
    })
    .unwrap();
    let path = dir.join("Sines_TRAIN.tsv");
    fs::write(&path, to_ucr_string(&ds)).unwrap();
    path
}

#[test]
fn binary_matches_library_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let data = sines(dir.path());
    let cli_out = dir.path().join("cli");
    let o = spfk(&[
        "select",
        "--data",
        data.to_str().unwrap(),
        "--mode",
        "bow",
        "--windows",
        "20,30",
        "--alphabets",
        "3,4",
        "--k-max",
        "5",
        "--trees",
        "40",
        "--seed",
        "7",
        "--format",
        "json,csv",
        "--out",
        cli_out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let line = String::from_utf8(o.stdout).unwrap();
    assert!(line.starts_with("dataset=Sines mode=bow predicted_k="), "{line}");
    assert!(line.contains(" silhouette=") && line.contains(" verdict="), "{line}");

    let mut config = RunConfig::new(Mode::Bow);
    config.data = vec![data.display().to_string()];
    config.data_dir = None;
    config.grid = SweepGrid {
        windows: vec![20, 30],
        alphabets: vec![3, 4],
        ..SweepGrid::new(Mode::Bow)
    }
    .with_k_range(2, 5);
    config.spf = SpfParams::default().with_ensemble_size(40).with_seed(7);
    config.out = dir.path().join("lib");
    config.formats = vec![Format::Json, Format::Csv];
    let outcome = cmd_select(&config).unwrap();
    assert_eq!(line.trim_end(), outcome[0].summary_line());

    for ext in ["json", "csv"] {
        let name = format!("Sines.bow.report.{ext}");
        assert_eq!(
            fs::read(cli_out.join(&name)).unwrap(),
            fs::read(config.out.join(&name)).unwrap(),
            "{name}"
        );
    }
    let report =
        SelectionReport::from_json(&fs::read_to_string(cli_out.join("Sines.bow.report.json")).unwrap()).unwrap();
    assert_eq!(report.true_k, Some(3));
}

#[test]
fn raw_mode_rejects_varying_lengths() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("Ragged_TRAIN.tsv");
    let rows: Vec<String> = (0..8)
        .map(|i| {
            let len = 30 + 3 * i;
            let values: Vec<String> = (0..len).map(|t| format!("{}", ((t * (i + 1)) as f64).sin())).collect();
            format!("{}\t{}", i % 2, values.join("\t"))
        })
        .collect();
    fs::write(&path, rows.join("\n")).unwrap();
    let o = spfk(&["select", "--data", path.to_str().unwrap(), "--mode", "raw", "--k-max", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("raw mode requires equal lengths"), "{}", stderr(&o));
}

#[test]
fn bad_configuration_exits_2() {
    let o = spfk(&["select", "--data", "x.tsv", "--mode", "spectral"]);
    assert_eq!(o.status.code(), Some(2));
    let o = spfk(&["select", "--data", "x.tsv", "--alphabets", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = spfk(&["select", "--data", "x.tsv", "--min-freq", "0.6", "--max-freq", "0.2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = spfk(&["select", "--nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_dataset_exits_1() {
    let o = spfk(&["select", "--data", "NoSuchDataset"]);
    assert_eq!(o.status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let o = spfk(&["benchmark", "--table", "IV", "--data-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn plot_silhouette_from_report() {
    let dir = tempfile::tempdir().unwrap();
    let data = sines(dir.path());
    let out = dir.path().join("out");
    let o = spfk(&[
        "select",
        "--data",
        data.to_str().unwrap(),
        "--windows",
        "20",
        "--alphabets",
        "4",
        "--k-max",
        "4",
        "--trees",
        "30",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = out.join("Sines.bow.report.json");
    let svg = dir.path().join("chart.svg");
    let o = spfk(&["plot-silhouette", report.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches(r#"class="best""#).count(), 1);
    assert_eq!(text.matches("<polyline").count(), 1);

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"dataset\": 3}").unwrap();
    let o = spfk(&["plot-silhouette", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
