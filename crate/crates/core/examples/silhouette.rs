//! Silhouette scores of a few labelings of points on a line.

use spfk::spf::Partition;
use spfk::validity::{euclidean_distances, silhouette};

pub fn run_example() -> spfk::Result<()> {
    let points: Vec<Vec<f64>> = [0.0, 1.0, 10.0, 11.0, 20.0, 21.0].iter().map(|&x| vec![x]).collect();
    let dm = euclidean_distances(&points)?;
    for labels in [vec![0, 0, 1, 1, 2, 2], vec![0, 0, 0, 0, 1, 1], vec![0, 1, 0, 1, 0, 1]] {
        let report = silhouette(&dm, &Partition::new(labels.clone())?)?;
        println!("{labels:?}: mean silhouette {:.4}", report.mean);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> spfk::Result<()> {
    run_example()
}
