//! Bag-of-words and TF-IDF features over SAX documents.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sax::{SaxDocument, SaxWord};

/// Distinct words of a corpus (sorted) with their document frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<SaxWord>,
    doc_frequency: Vec<usize>,
    documents: usize,
}

impl Vocabulary {
    pub fn build(docs: &[SaxDocument]) -> Result<Self> {
        if docs.iter().all(SaxDocument::is_empty) {
            return Err(Error::EmptyDocuments);
        }
        let mut df: BTreeMap<&SaxWord, (usize, usize)> = BTreeMap::new();
        for (i, d) in docs.iter().enumerate() {
            for w in &d.words {
                let e = df.entry(w).or_insert((0, usize::MAX));
                if e.1 != i {
                    e.0 += 1;
                    e.1 = i;
                }
            }
        }
        let (words, doc_frequency) = df.into_iter().map(|(w, (c, _))| (w.clone(), c)).unzip();
        Ok(Vocabulary {
            words,
            doc_frequency,
            documents: docs.len(),
        })
    }

    pub fn words(&self) -> &[SaxWord] {
        &self.words
    }

    pub fn doc_frequency(&self) -> &[usize] {
        &self.doc_frequency
    }

    pub fn documents(&self) -> usize {
        self.documents
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, word: &SaxWord) -> Option<usize> {
        self.words.binary_search(word).ok()
    }

    /// Keeps the words whose document-frequency fraction passes `filter`.
    pub fn filtered(&self, filter: &FrequencyFilter) -> Vocabulary {
        let n = self.documents as f64;
        let (words, doc_frequency) = self
            .words
            .iter()
            .zip(&self.doc_frequency)
            .filter(|&(_, &df)| filter.accepts(df as f64 / n))
            .map(|(w, &df)| (w.clone(), df))
            .unzip();
        Vocabulary {
            words,
            doc_frequency,
            documents: self.documents,
        }
    }
}

/// Inclusive bounds on the fraction of documents a word may occur in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyFilter {
    pub min_freq: f64,
    pub max_freq: f64,
}

impl FrequencyFilter {
    pub fn new(min_freq: f64, max_freq: f64) -> Result<Self> {
        let ok = (0.0..=1.0).contains(&min_freq)
            && max_freq > 0.0
            && max_freq <= 1.0
            && min_freq < max_freq;
        if !ok {
            return Err(Error::FrequencyFilter {
                min: min_freq,
                max: max_freq,
            });
        }
        Ok(FrequencyFilter { min_freq, max_freq })
    }

    /// Accepts every word.
    pub fn none() -> Self {
        FrequencyFilter {
            min_freq: 0.0,
            max_freq: 1.0,
        }
    }

    pub fn accepts(&self, fraction: f64) -> bool {
        fraction >= self.min_freq && fraction <= self.max_freq
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureKind {
    BoW,
    TfIdf,
}

/// One sparse feature vector per series over a shared vocabulary.
/// Row entries are `(column, value)` sorted by column, zeros omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    kind: FeatureKind,
    vocabulary: Vec<SaxWord>,
    rows: Vec<Vec<(u32, f64)>>,
}

impl FeatureMatrix {
    pub fn kind(&self) -> FeatureKind {
        self.kind
    }

    pub fn vocabulary(&self) -> &[SaxWord] {
        &self.vocabulary
    }

    pub fn dim(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn sparse_rows(&self) -> &[Vec<(u32, f64)>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for &(c, v) in &self.rows[i] {
            out[c as usize] = v;
        }
        out
    }

    pub fn get(&self, i: usize, col: usize) -> f64 {
        self.rows[i]
            .binary_search_by_key(&(col as u32), |&(c, _)| c)
            .map_or(0.0, |p| self.rows[i][p].1)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n_rows()).map(|i| self.row(i)).collect()
    }

    pub fn scaled(&self, factor: f64) -> FeatureMatrix {
        FeatureMatrix {
            kind: self.kind,
            vocabulary: self.vocabulary.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&(c, v)| (c, v * factor)).collect())
                .collect(),
        }
    }

    /// CSV with the vocabulary as header and one row per series id.
    pub fn to_csv(&self, ids: &[&str]) -> String {
        let mut out = String::from("id");
        for w in &self.vocabulary {
            let _ = write!(out, ",{w}");
        }
        out.push('\n');
        for (i, id) in ids.iter().enumerate().take(self.n_rows()) {
            out.push_str(id);
            for v in self.row(i) {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}

fn counts(doc: &SaxDocument, vocab: &Vocabulary) -> Vec<(u32, f64)> {
    let mut c: BTreeMap<u32, f64> = BTreeMap::new();
    for w in &doc.words {
        if let Some(col) = vocab.index_of(w) {
            *c.entry(col as u32).or_insert(0.0) += 1.0;
        }
    }
    c.into_iter().collect()
}

/// Occurrence counts of every vocabulary word in every document.
pub fn bow_matrix(docs: &[SaxDocument]) -> Result<FeatureMatrix> {
    let vocab = Vocabulary::build(docs)?;
    Ok(FeatureMatrix {
        kind: FeatureKind::BoW,
        rows: docs.iter().map(|d| counts(d, &vocab)).collect(),
        vocabulary: vocab.words,
    })
}

/// `count(w, d) / |d| * ln(n / df(w))` over the words that pass `filter`.
pub fn tfidf_matrix(docs: &[SaxDocument], filter: &FrequencyFilter) -> Result<FeatureMatrix> {
    FrequencyFilter::new(filter.min_freq, filter.max_freq)?;
    if docs.len() < 2 {
        return Err(Error::TooFewSeries(docs.len()));
    }
    let vocab = Vocabulary::build(docs)?.filtered(filter);
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let n = docs.len() as f64;
    let idf: Vec<f64> = vocab
        .doc_frequency
        .iter()
        .map(|&df| (n / df as f64).ln())
        .collect();
    let rows = docs
        .iter()
        .map(|d| {
            let len = d.len() as f64;
            counts(d, &vocab)
                .into_iter()
                .map(|(c, cnt)| (c, cnt / len * idf[c as usize]))
                .filter(|&(_, v)| v != 0.0)
                .collect()
        })
        .collect();
    Ok(FeatureMatrix {
        kind: FeatureKind::TfIdf,
        vocabulary: vocab.words,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spf::presence_matrix;
    use proptest::prelude::*;

    fn doc(id: &str, words: &[&str]) -> SaxDocument {
        SaxDocument::new(id, words.iter().map(|w| SaxWord::from(*w)).collect())
    }

    #[test]
    fn bow_single_document() {
        let m = bow_matrix(&[doc("d", &["ab", "ab", "ba"])]).unwrap();
        assert_eq!(m.vocabulary(), &[SaxWord::from("ab"), SaxWord::from("ba")]);
        assert_eq!(m.row(0), vec![2.0, 1.0]);
    }

    #[test]
    fn bow_like_rock_excerpt() {
        // counts for one word across three series as in a published excerpt
        let docs = [
            doc("ts1", &["ddddb", "ddddb", "ddddb", "caadb", "aaabb"]),
            doc("ts2", &["ddddb", "caadb", "caadb", "ddddb", "caadb"]),
            doc("ts3", &["caadb", "caadb", "abbab"]),
        ];
        let m = bow_matrix(&docs).unwrap();
        let col = m.vocabulary().iter().position(|w| w.as_str() == "ddddb").unwrap();
        assert_eq!(
            (0..3).map(|i| m.get(i, col)).collect::<Vec<_>>(),
            vec![3.0, 2.0, 0.0]
        );
    }

    #[test]
    fn tfidf_hand_computed() {
        let docs = [doc("1", &["w1", "w1", "w2"]), doc("2", &["w2"])];
        let m = tfidf_matrix(&docs, &FrequencyFilter::none()).unwrap();
        let expected = 2.0 / 3.0 * 2f64.ln();
        assert!((m.get(0, 0) - expected).abs() < 1e-12);
        assert!((m.get(0, 0) - 0.4621).abs() < 1e-4);
        assert_eq!(m.get(0, 1), 0.0);
        assert_eq!(m.get(1, 1), 0.0);
        assert_eq!(m.get(1, 0), 0.0);
    }

    #[test]
    fn tfidf_filter_bounds_are_inclusive() {
        let docs = [
            doc("1", &["a", "b"]),
            doc("2", &["a"]),
            doc("3", &["a", "c"]),
            doc("4", &["d"]),
        ];
        // df fractions: a 0.75, b 0.25, c 0.25, d 0.25
        let m = tfidf_matrix(&docs, &FrequencyFilter::new(0.25, 0.75).unwrap()).unwrap();
        assert_eq!(m.dim(), 4);
        let m = tfidf_matrix(&docs, &FrequencyFilter::new(0.3, 1.0).unwrap()).unwrap();
        assert_eq!(m.vocabulary(), &[SaxWord::from("a")]);
        assert!(matches!(
            tfidf_matrix(&docs, &FrequencyFilter { min_freq: 0.8, max_freq: 0.9 }),
            Err(Error::EmptyVocabulary)
        ));
        assert!(FrequencyFilter::new(0.5, 0.5).is_err());
        assert!(FrequencyFilter::new(0.5, 0.4).is_err());
        assert!(FrequencyFilter::new(0.0, 0.0).is_err());
        assert!(matches!(
            tfidf_matrix(&docs, &FrequencyFilter { min_freq: 0.6, max_freq: 0.2 }),
            Err(Error::FrequencyFilter { .. })
        ));
    }

    #[test]
    fn ubiquitous_word_is_a_zero_column() {
        let docs = [doc("1", &["x", "y"]), doc("2", &["x", "x"]), doc("3", &["x", "z"])];
        let m = tfidf_matrix(&docs, &FrequencyFilter::none()).unwrap();
        assert_eq!(m.vocabulary()[0].as_str(), "x");
        assert!((0..3).all(|i| m.get(i, 0) == 0.0));
    }

    #[test]
    fn csv_dump() {
        let m = bow_matrix(&[doc("1", &["ab"]), doc("2", &["ba", "ba"])]).unwrap();
        assert_eq!(m.to_csv(&["s1", "s2"]), "id,ab,ba\ns1,1,0\ns2,0,2\n");
    }

    fn corpus() -> impl Strategy<Value = Vec<SaxDocument>> {
        prop::collection::vec(
            prop::collection::vec(prop::sample::select(vec!["aa", "ab", "ba", "bb", "cc", "ca"]), 0..12),
            2..10,
        )
        .prop_filter("one non-empty doc", |d| d.iter().any(|w| !w.is_empty()))
        .prop_map(|docs| {
            docs.iter()
                .enumerate()
                .map(|(i, ws)| doc(&i.to_string(), ws))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn bow_row_sums_equal_lengths(docs in corpus()) {
            let m = bow_matrix(&docs).unwrap();
            for (i, d) in docs.iter().enumerate() {
                prop_assert_eq!(m.row(i).iter().sum::<f64>(), d.len() as f64);
            }
        }

        #[test]
        fn tfidf_zero_pattern(docs in corpus()) {
            let m = tfidf_matrix(&docs, &FrequencyFilter::none()).unwrap();
            let bow = bow_matrix(&docs).unwrap();
            let vocab = Vocabulary::build(&docs).unwrap();
            prop_assert_eq!(m.vocabulary(), bow.vocabulary());
            for i in 0..docs.len() {
                for c in 0..m.dim() {
                    let v = m.get(i, c);
                    prop_assert!(v >= 0.0);
                    let zero = bow.get(i, c) == 0.0 || vocab.doc_frequency()[c] == docs.len();
                    prop_assert_eq!(v == 0.0, zero);
                }
            }
        }

        #[test]
        fn widening_filter_keeps_columns(docs in corpus(), a in 0.0f64..0.5, b in 0.5f64..1.0, da in 0.0f64..0.3, db in 0.0f64..0.5) {
            let vocab = Vocabulary::build(&docs).unwrap();
            let narrow = vocab.filtered(&FrequencyFilter::new(a, b).unwrap());
            let wide = vocab.filtered(&FrequencyFilter::new((a - da).max(0.0), (b + db).min(1.0)).unwrap());
            for w in narrow.words() {
                prop_assert!(wide.index_of(w).is_some());
            }
        }

        #[test]
        fn thresholded_bow_is_presence(docs in corpus()) {
            prop_assume!(docs.len() >= 2);
            let bow = bow_matrix(&docs).unwrap();
            let pm = presence_matrix(&docs).unwrap();
            prop_assert_eq!(bow.vocabulary(), pm.vocabulary());
            for i in 0..docs.len() {
                let thresholded: Vec<bool> = bow.row(i).iter().map(|&v| v > 0.0).collect();
                prop_assert_eq!(thresholded, pm.row(i));
            }
        }
    }
}
