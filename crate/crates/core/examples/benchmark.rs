//! Compare raw, BoW and TF-IDF selection over the Table IV datasets found
//! under `SPFK_DATA_DIR`. Without that variable a small synthetic stand-in
//! directory is used instead.

use spfk::commands::{cmd_benchmark, RunConfig};
use spfk::data::to_ucr_string;
use spfk::fixtures::TableId;
use spfk::selection::{Mode, SweepGrid};
use spfk::synthetic::{generate_synthetic, GeneratorKind, SyntheticSpec};

pub fn run_example() -> spfk::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut config = RunConfig::new(Mode::Bow);
    config.out = dir.path().join("out");
    if config.data_dir.is_none() {
        for (name, kind, classes) in [("SineTwo", GeneratorKind::Sine, 2), ("SquareThree", GeneratorKind::Square, 3)] {
            let spec = SyntheticSpec { kind, classes, per_class: 8, length: 64, noise: 0.1, seed: 1 };
            let ds = generate_synthetic(&spec)?;
            std::fs::write(dir.path().join(format!("{name}_TRAIN.tsv")), to_ucr_string(&ds)).expect("write dataset");
        }
        config.data_dir = Some(dir.path().to_path_buf());
        config.data = vec!["SineTwo".into(), "SquareThree".into()];
        config.grid = SweepGrid { windows: vec![16, 32], alphabets: vec![3, 4], ..SweepGrid::new(Mode::Bow) }.with_k_range(2, 5);
    }
    let out = cmd_benchmark(&config, TableId::IV)?;
    for r in &out.rows {
        println!("{:24} actual {:?} predicted raw/bow/tfidf {:?}", r.dataset, r.actual_k, r.predicted);
    }
    for m in Mode::ALL {
        println!("{m}: {} correct of {}", out.correct_count(m), out.rows.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> spfk::Result<()> {
    run_example()
}
