//! Write a small dataset in UCR format, read it back and z-normalize a window.

use spfk::data::{load_ucr, subsequences, to_ucr_string, znormalize, Delimiter};
use spfk::synthetic::{generate_synthetic, SyntheticSpec};

pub fn run_example() -> spfk::Result<()> {
    let ds = generate_synthetic(&SyntheticSpec { per_class: 4, length: 48, ..SyntheticSpec::three_class(1) })?;
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("Sines_TRAIN.tsv");
    std::fs::write(&path, to_ucr_string(&ds)).expect("write dataset");

    let loaded = load_ucr(&path, Delimiter::Auto)?;
    println!(
        "{}: {} series, true k = {:?}, shortest length {}",
        loaded.name(),
        loaded.len(),
        loaded.true_k(),
        loaded.min_length()
    );

    let first = &loaded.series()[0];
    let windows = subsequences(first, 16)?;
    println!("series {} has {} windows of length 16", first.id(), windows.len());
    let z = znormalize(windows[0].values, 1e-8);
    let mean = z.iter().sum::<f64>() / z.len() as f64;
    println!("first window after z-normalization: mean {mean:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> spfk::Result<()> {
    run_example()
}
