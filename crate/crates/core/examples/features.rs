//! Bag-of-words counts and TF-IDF weights over a SAX corpus.

use spfk::sax::{SaxDocument, SaxWord};
use spfk::vectorize::{bow_matrix, tfidf_matrix, FrequencyFilter};

fn doc(id: &str, words: &str) -> SaxDocument {
    SaxDocument::new(id, words.split_whitespace().map(SaxWord::from).collect())
}

pub fn run_example() -> spfk::Result<()> {
    let docs = [
        doc("ts1", "ddddb ddddb ddddb caadb aaabb"),
        doc("ts2", "ddddb caadb caadb ddddb caadb"),
        doc("ts3", "caadb caadb abbab"),
    ];
    let ids = ["ts1", "ts2", "ts3"];
    print!("{}", bow_matrix(&docs)?.to_csv(&ids));

    let tfidf = tfidf_matrix(&docs, &FrequencyFilter::none())?;
    println!("tf-idf (caadb occurs everywhere, so its column is zero):");
    for (i, id) in ids.iter().enumerate() {
        let row: Vec<String> = tfidf.row(i).iter().map(|v| format!("{v:.3}")).collect();
        println!("{id}: {}", row.join(" "));
    }

    let filtered = tfidf_matrix(&docs, &FrequencyFilter::new(0.3, 0.9)?)?;
    let kept: Vec<&str> = filtered.vocabulary().iter().map(|w| w.as_str()).collect();
    println!("words kept by the [0.3, 0.9] filter: {kept:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> spfk::Result<()> {
    run_example()
}
