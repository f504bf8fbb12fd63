//! Published result tables for the raw, BoW and TF-IDF experiments.
//!
//! The tables ship as CSV under `fixtures/` and are embedded at compile time.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::selection::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableId {
    /// Silhouette on raw series.
    III,
    /// Silhouette on BoW vectors.
    IV,
    /// Silhouette on TF-IDF vectors.
    V,
}

impl TableId {
    pub const ALL: [TableId; 3] = [TableId::III, TableId::IV, TableId::V];

    fn csv(self) -> &'static str {
        match self {
            TableId::III => include_str!("../fixtures/table3.csv"),
            TableId::IV => include_str!("../fixtures/table4.csv"),
            TableId::V => include_str!("../fixtures/table5.csv"),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableId::III => "III",
            TableId::IV => "IV",
            TableId::V => "V",
        })
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "III" | "3" => Ok(TableId::III),
            "IV" | "4" => Ok(TableId::IV),
            "V" | "5" => Ok(TableId::V),
            _ => Err(Error::Config(format!("unknown table {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublishedRow {
    pub dataset: String,
    pub table: TableId,
    pub window: Option<usize>,
    pub alphabet: Option<usize>,
    pub min_freq: Option<f64>,
    pub max_freq: Option<f64>,
    pub actual_k: usize,
    pub predicted_k: usize,
    pub verdict: Verdict,
    /// The published value where the stored one differs.
    pub printed_as: Option<String>,
}

fn parse<T: FromStr>(field: &str, row: usize, what: &str) -> T {
    field
        .trim()
        .parse()
        .unwrap_or_else(|_| panic!("fixture row {row}: bad {what} {field:?}"))
}

/// The 30 rows of one table, in the published order.
pub fn load_fixture(table: TableId) -> Vec<PublishedRow> {
    let mut lines = table.csv().lines();
    let header: Vec<&str> = lines.next().expect("fixture header").split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    lines
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            let opt = |name: &str| col(name).map(|c| f[c]).filter(|v| !v.is_empty());
            PublishedRow {
                dataset: f[0].to_string(),
                table,
                window: opt("window").map(|v| parse(v, i, "window")),
                alphabet: opt("alphabet").map(|v| parse(v, i, "alphabet")),
                min_freq: opt("min_freq").map(|v| parse(v, i, "min_freq")),
                max_freq: opt("max_freq").map(|v| parse(v, i, "max_freq")),
                actual_k: parse(opt("actual_k").unwrap_or(""), i, "actual_k"),
                predicted_k: parse(opt("predicted_k").unwrap_or(""), i, "predicted_k"),
                verdict: parse(opt("verdict").unwrap_or(""), i, "verdict"),
                printed_as: opt("printed_as").map(str::to_string),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::{summarize, verdict};

    fn row(table: TableId, name: &str) -> PublishedRow {
        load_fixture(table).into_iter().find(|r| r.dataset == name).unwrap()
    }

    #[test]
    fn examples() {
        let g = row(TableId::III, "GunPoint");
        assert_eq!((g.actual_k, g.predicted_k, g.verdict), (2, 2, Verdict::Correct));
        let p = row(TableId::IV, "Plane");
        assert_eq!((p.window, p.alphabet, p.actual_k, p.predicted_k), (Some(10), Some(4), 7, 7));
        let w = row(TableId::V, "Wafer");
        assert_eq!((w.min_freq, w.max_freq, w.predicted_k), (Some(0.001), Some(0.99), 2));
        let b = row(TableId::IV, "Beef");
        assert_eq!((b.window, b.alphabet, b.actual_k, b.predicted_k), (Some(5), Some(8), 5, 5));
    }

    #[test]
    fn lightning7_alphabet_is_annotated() {
        let l = row(TableId::V, "Lightning7");
        assert_eq!(l.alphabet, Some(8));
        assert_eq!(l.printed_as.as_deref(), Some("alphabet=80"));
        assert!(load_fixture(TableId::V).iter().filter(|r| r.printed_as.is_some()).count() == 1);
    }

    #[test]
    fn thirty_rows_with_consistent_remarks() {
        for t in TableId::ALL {
            let rows = load_fixture(t);
            assert_eq!(rows.len(), 30, "{t}");
            for r in &rows {
                assert_eq!(verdict(r.predicted_k, r.actual_k), r.verdict, "{t} {}", r.dataset);
            }
        }
    }

    #[test]
    fn verdict_counts() {
        let count = |t| {
            let rows = load_fixture(t);
            let c = |v| rows.iter().filter(|r| r.verdict == v).count();
            (c(Verdict::Correct), c(Verdict::Close), c(Verdict::Wrong))
        };
        assert_eq!(count(TableId::III), (6, 7, 17));
        assert_eq!(count(TableId::IV), (18, 6, 6));
        assert_eq!(count(TableId::V), (18, 6, 6));
        let iii: Vec<Verdict> = load_fixture(TableId::III).iter().map(|r| r.verdict).collect();
        let s = summarize(&iii).unwrap();
        assert_eq!(s.correct_pct, 20.0);
        assert!((s.close_pct - 23.333).abs() < 1e-3);
        assert!((s.wrong_pct - 56.667).abs() < 1e-3);
    }
}
