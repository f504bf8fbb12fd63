//! The published raw, BoW and TF-IDF results, re-scored with the verdict rule.

use spfk::fixtures::{load_fixture, TableId};
use spfk::selection::{summarize, verdict};

pub fn run_example() -> spfk::Result<()> {
    for table in TableId::ALL {
        let rows = load_fixture(table);
        let verdicts: Vec<_> = rows.iter().map(|r| verdict(r.predicted_k, r.actual_k)).collect();
        let agree = rows.iter().zip(&verdicts).all(|(r, v)| r.verdict == *v);
        let s = summarize(&verdicts)?;
        println!(
            "table {table}: {} rows, remarks reproduced: {agree}, correct {:.1}% close {:.1}% wrong {:.1}%",
            rows.len(),
            s.correct_pct,
            s.close_pct,
            s.wrong_pct
        );
        for r in rows.iter().filter(|r| r.printed_as.is_some()) {
            println!("  {}: stored alphabet {:?}, printed as {}", r.dataset, r.alphabet, r.printed_as.as_deref().unwrap());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> spfk::Result<()> {
    run_example()
}
