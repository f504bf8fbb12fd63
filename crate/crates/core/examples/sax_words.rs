//! Turn windows into SAX words and a whole series into a SAX document.

use spfk::data::TimeSeries;
use spfk::sax::{breakpoints, sax_document, sax_word, SaxParams};

pub fn run_example() -> spfk::Result<()> {
    for a in [3, 4, 8] {
        let bp: Vec<String> = breakpoints(a)?.iter().map(|b| format!("{b:.4}")).collect();
        println!("alphabet {a}: breakpoints [{}]", bp.join(", "));
    }

    // high first half, low second half
    let window = [1.0, 1.2, -0.9, -1.3];
    let word = sax_word(&window, SaxParams::new(4, 2, 4)?)?;
    println!("{window:?} -> {word}");

    let values: Vec<f64> = (0..60).map(|t| (t as f64 / 6.0).sin()).collect();
    let series = TimeSeries::new("wave", values, None)?;
    let doc = sax_document(&series, SaxParams::new(12, 4, 5)?)?;
    let head: Vec<&str> = doc.words.iter().take(8).map(|w| w.as_str()).collect();
    println!("{} words, starting {}", doc.len(), head.join(" "));
    Ok(())
}

#[allow(dead_code)]
fn main() -> spfk::Result<()> {
    run_example()
}
