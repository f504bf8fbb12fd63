//! Run the `select` command through the library: reports land on disk as
//! JSON, CSV and an SVG silhouette chart.

use spfk::commands::{cmd_plot_silhouette, cmd_select, Format, RunConfig};
use spfk::data::to_ucr_string;
use spfk::selection::{Mode, SweepGrid};
use spfk::synthetic::{generate_synthetic, SyntheticSpec};

pub fn run_example() -> spfk::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    let ds = generate_synthetic(&SyntheticSpec { per_class: 10, ..SyntheticSpec::three_class(5) })?;
    let file = dir.path().join("Sines_TRAIN.tsv");
    std::fs::write(&file, to_ucr_string(&ds)).expect("write dataset");

    let mut config = RunConfig::new(Mode::Bow);
    config.data = vec![file.display().to_string()];
    config.grid = SweepGrid { windows: vec![20, 30], alphabets: vec![3, 4], ..SweepGrid::new(Mode::Bow) }.with_k_range(2, 6);
    config.out = dir.path().join("reports");
    config.formats = vec![Format::Json, Format::Csv];

    for outcome in cmd_select(&config)? {
        println!("{}", outcome.summary_line());
        let svg = cmd_plot_silhouette(&outcome.files[0], None)?;
        for f in outcome.files.iter().chain([&svg]) {
            println!("  wrote {}", f.file_name().unwrap().to_string_lossy());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> spfk::Result<()> {
    run_example()
}
