//! Cluster SAX documents with a Symbolic Pattern Forest and compare against
//! the generating labels.

use spfk::eval::adjusted_rand_index;
use spfk::sax::{SaxEncoder, SaxParams};
use spfk::spf::{SpfClusterer, SpfParams};
use spfk::synthetic::{generate_synthetic, SyntheticSpec};

pub fn run_example() -> spfk::Result<()> {
    let ds = generate_synthetic(&SyntheticSpec::three_class(7))?;
    let sax = SaxParams::new(40, 5, 5)?;
    let docs = SaxEncoder::new(sax)?.documents(&ds)?;
    let params = SpfParams::default().with_sax(sax).with_seed(7);
    let clusterer = SpfClusterer::new(&docs, &params)?;
    let truth = ds.labels().expect("synthetic data is labeled");
    for k in 2..=4 {
        let p = clusterer.cluster(k)?;
        println!(
            "k={k}: sizes {:?}, adjusted Rand index {:.3}",
            p.sizes(),
            adjusted_rand_index(p.labels(), &truth)
        );
    }
    let co = clusterer.co_association(3)?;
    println!(
        "co-association at k=3: series 0 and 1 share a leaf in {} of {} trees, 0 and 59 in {}",
        co.count(0, 1),
        co.trees(),
        co.count(0, 59)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> spfk::Result<()> {
    run_example()
}
