//! Pick the number of clusters of a labeled dataset by sweeping k and SAX
//! parameters and keeping the highest BoW silhouette.

use spfk::selection::{run_sweep, Mode, SweepGrid};
use spfk::spf::SpfParams;
use spfk::synthetic::{generate_synthetic, SyntheticSpec};

pub fn run_example() -> spfk::Result<()> {
    let ds = generate_synthetic(&SyntheticSpec::three_class(3))?;
    let grid = SweepGrid {
        windows: vec![20, 30, 40],
        alphabets: vec![3, 4, 5],
        ..SweepGrid::new(Mode::Bow)
    };
    let report = run_sweep(&ds, &grid, &SpfParams::default().with_seed(3))?;
    let sax = report.best.sax.expect("bow cells carry sax parameters");
    println!(
        "{}: predicted k = {} (true k = {:?}, {:?}) at window {} alphabet {}, silhouette {:.4}",
        report.dataset,
        report.predicted_k,
        report.true_k,
        report.verdict,
        sax.window,
        sax.alphabet,
        report.best.silhouette
    );
    for c in report.cells.iter().filter(|c| c.sax == Some(sax)) {
        println!("  k={:2} silhouette {:.4}", c.k, c.silhouette);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> spfk::Result<()> {
    run_example()
}
