//! Symbolic Pattern Forest clustering.
//!
//! Each tree starts from the whole dataset and repeatedly splits its largest
//! node on the presence or absence of a SAX word, until it has `k` leaves or
//! nothing more can be split. The split word is a random word occurrence of a
//! random member of the node. The leaves of all trees are fused through a
//! co-association matrix (the number of trees that put two series in the same
//! leaf) and average-linkage agglomeration cut at `k` clusters.

mod linkage;

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sax::{SaxDocument, SaxParams, SaxWord};

pub use linkage::{average_linkage, Dendrogram, Merge};

/// Split attempts per node before the node is declared a leaf.
pub const MAX_REDRAWS: usize = 32;
/// Extra depth allowed beyond `ceil(log2 n)`.
pub const DEPTH_SLACK: usize = 4;
pub const DEFAULT_ENSEMBLE_SIZE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpfParams {
    /// SAX transform used when clustering a dataset directly.
    pub sax: SaxParams,
    pub ensemble_size: usize,
    /// Patterns drawn per split attempt; the first one that separates the
    /// node is used.
    pub patterns_per_split: usize,
    pub rng_seed: u64,
}

impl Default for SpfParams {
    fn default() -> Self {
        SpfParams {
            sax: SaxParams {
                window: 20,
                word_length: 5,
                alphabet: 4,
            },
            ensemble_size: DEFAULT_ENSEMBLE_SIZE,
            patterns_per_split: 1,
            rng_seed: 0,
        }
    }
}

impl SpfParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_sax(mut self, sax: SaxParams) -> Self {
        self.sax = sax;
        self
    }

    pub fn with_ensemble_size(mut self, trees: usize) -> Self {
        self.ensemble_size = trees;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.ensemble_size == 0 {
            return Err(Error::Config("ensemble size must be at least 1".into()));
        }
        if self.patterns_per_split == 0 {
            return Err(Error::Config("patterns per split must be at least 1".into()));
        }
        self.sax.validate()
    }
}

/// Which vocabulary words occur in which series, plus each series' word
/// sequence as column indices. Presence is stored column-major as bitsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresenceMatrix {
    rows: usize,
    vocabulary: Vec<SaxWord>,
    stride: usize,
    bits: Vec<u64>,
    tokens: Vec<Vec<u32>>,
}

impl PresenceMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn vocabulary(&self) -> &[SaxWord] {
        &self.vocabulary
    }

    pub fn columns(&self) -> usize {
        self.vocabulary.len()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[col * self.stride + row / 64] >> (row % 64) & 1 == 1
    }

    pub fn row(&self, row: usize) -> Vec<bool> {
        (0..self.columns()).map(|c| self.get(row, c)).collect()
    }

    /// Column index of every word of series `row`, in order.
    pub fn tokens(&self, row: usize) -> &[u32] {
        &self.tokens[row]
    }

    /// Builds a matrix from explicit rows (one `bool` per column). Each row's
    /// token sequence is its present columns, once each.
    pub fn from_rows(vocabulary: Vec<SaxWord>, rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        let stride = n.div_ceil(64).max(1);
        let mut bits = vec![0u64; stride * vocabulary.len()];
        let mut tokens = Vec::with_capacity(n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != vocabulary.len() {
                return Err(Error::DimensionMismatch {
                    row: r,
                    expected: vocabulary.len(),
                    found: row.len(),
                });
            }
            let mut present = Vec::new();
            for (c, &on) in row.iter().enumerate() {
                if on {
                    bits[c * stride + r / 64] |= 1 << (r % 64);
                    present.push(c as u32);
                }
            }
            tokens.push(present);
        }
        Ok(PresenceMatrix {
            rows: n,
            vocabulary,
            stride,
            bits,
            tokens,
        })
    }

    /// Whether `col` is present in some but not all of `members`.
    #[inline]
    fn separates(&self, members: &[u32], col: usize) -> bool {
        let first = self.get(members[0] as usize, col);
        members[1..].iter().any(|&m| self.get(m as usize, col) != first)
    }
}

/// Presence of each distinct word (sorted lexicographically) in each document.
pub fn presence_matrix(docs: &[SaxDocument]) -> Result<PresenceMatrix> {
    if docs.len() < 2 {
        return Err(Error::TooFewSeries(docs.len()));
    }
    if docs.iter().all(SaxDocument::is_empty) {
        return Err(Error::EmptyDocuments);
    }
    let mut columns: BTreeMap<&SaxWord, Vec<u32>> = BTreeMap::new();
    for (r, doc) in docs.iter().enumerate() {
        for w in &doc.words {
            let rows = columns.entry(w).or_default();
            if rows.last() != Some(&(r as u32)) {
                rows.push(r as u32);
            }
        }
    }
    let n = docs.len();
    let stride = n.div_ceil(64);
    let mut bits = vec![0u64; stride * columns.len()];
    let mut vocabulary = Vec::with_capacity(columns.len());
    for (c, (w, rows)) in columns.into_iter().enumerate() {
        vocabulary.push(w.clone());
        for r in rows {
            bits[c * stride + r as usize / 64] |= 1 << (r % 64);
        }
    }
    let tokens = docs
        .iter()
        .map(|d| {
            d.words
                .iter()
                .map(|w| vocabulary.binary_search(w).expect("word in vocabulary") as u32)
                .collect()
        })
        .collect();
    Ok(PresenceMatrix {
        rows: n,
        vocabulary,
        stride,
        bits,
        tokens,
    })
}

/// A flat clustering with ids `0..k`, each id used at least once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    k: usize,
    labels: Vec<usize>,
}

impl Partition {
    /// Validates that ids cover `0..k` with no gaps.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidPartition("no labels".into()));
        }
        let k = labels.iter().max().unwrap() + 1;
        let mut used = vec![false; k];
        labels.iter().for_each(|&l| used[l] = true);
        if let Some(empty) = used.iter().position(|u| !u) {
            return Err(Error::InvalidPartition(format!("cluster {empty} is empty")));
        }
        Ok(Partition { k, labels })
    }

    /// Renumbers arbitrary ids by order of first occurrence.
    pub fn from_ids<T: Eq + std::hash::Hash + Copy>(ids: &[T]) -> Self {
        let mut map = HashMap::new();
        let labels = ids
            .iter()
            .map(|id| {
                let next = map.len();
                *map.entry(*id).or_insert(next)
            })
            .collect();
        Partition { k: map.len(), labels }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        self.labels.iter().for_each(|&l| s[l] += 1);
        s
    }
}

/// Pairwise tree agreement counts over a forest.
///
/// Series that share a leaf in every tree form one profile; counts are kept
/// per pair of profiles, which is far smaller than `n^2` when trees have few
/// leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoAssociation {
    n: usize,
    trees: usize,
    profile_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    // strict upper triangle over profiles, row-major
    counts: Vec<u32>,
}

impl CoAssociation {
    pub fn from_forest(n: usize, forest: &[Partition]) -> Self {
        assert!(forest.iter().all(|t| t.len() == n), "tree sizes differ from n");
        let signatures: Vec<Vec<u32>> = (0..n)
            .map(|i| forest.iter().map(|t| t.labels()[i] as u32).collect())
            .collect();
        let mut index: HashMap<&[u32], usize> = HashMap::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let profile_of: Vec<usize> = signatures
            .iter()
            .enumerate()
            .map(|(i, sig)| {
                let p = *index.entry(sig.as_slice()).or_insert_with(|| {
                    members.push(Vec::new());
                    members.len() - 1
                });
                members[p].push(i);
                p
            })
            .collect();
        let reps: Vec<&[u32]> = members.iter().map(|m| signatures[m[0]].as_slice()).collect();
        let counts = if forest.iter().map(Partition::k).sum::<usize>() <= 64 * BITSET_WORDS {
            pair_counts_bitset(&reps, forest)
        } else {
            pair_counts_grouped(&reps, forest)
        };
        CoAssociation {
            n,
            trees: forest.len(),
            profile_of,
            members,
            counts,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn trees(&self) -> usize {
        self.trees
    }

    pub fn profiles(&self) -> usize {
        self.members.len()
    }

    /// Series of each profile, ascending; profiles are numbered by first
    /// occurrence.
    pub fn profile_members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn profile_of(&self, i: usize) -> usize {
        self.profile_of[i]
    }

    pub fn profile_count(&self, p: usize, q: usize) -> u32 {
        match p.cmp(&q) {
            std::cmp::Ordering::Equal => self.trees as u32,
            std::cmp::Ordering::Less => self.counts[tri_row(self.members.len(), p) + (q - p - 1)],
            std::cmp::Ordering::Greater => {
                self.counts[tri_row(self.members.len(), q) + (p - q - 1)]
            }
        }
    }

    /// Number of trees placing `i` and `j` in the same leaf.
    pub fn count(&self, i: usize, j: usize) -> u32 {
        self.profile_count(self.profile_of[i], self.profile_of[j])
    }

    /// Fraction of trees placing `i` and `j` in the same leaf.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            1.0
        } else {
            self.count(i, j) as f64 / self.trees as f64
        }
    }
}

/// Above this many 64-bit words per profile, counting by leaf groups is
/// cheaper than intersecting leaf bitsets.
const BITSET_WORDS: usize = 16;

/// Strict upper triangle of shared-leaf counts between profiles, one bit per
/// (tree, leaf) and a popcount per pair.
fn pair_counts_bitset(reps: &[&[u32]], forest: &[Partition]) -> Vec<u32> {
    let profiles = reps.len();
    let mut offsets = Vec::with_capacity(forest.len());
    let mut total = 0;
    for t in forest {
        offsets.push(total);
        total += t.k();
    }
    let words = total.div_ceil(64).max(1);
    let mut bits = vec![0u64; profiles * words];
    for (p, sig) in reps.iter().enumerate() {
        for (t, &leaf) in sig.iter().enumerate() {
            let b = offsets[t] + leaf as usize;
            bits[p * words + b / 64] |= 1 << (b % 64);
        }
    }
    let mut counts = vec![0u32; profiles * profiles.saturating_sub(1) / 2];
    for p in 0..profiles {
        let row = tri_row(profiles, p);
        let bp = &bits[p * words..(p + 1) * words];
        for q in p + 1..profiles {
            let bq = &bits[q * words..(q + 1) * words];
            counts[row + (q - p - 1)] = bp.iter().zip(bq).map(|(x, y)| (x & y).count_ones()).sum();
        }
    }
    counts
}

fn pair_counts_grouped(reps: &[&[u32]], forest: &[Partition]) -> Vec<u32> {
    let profiles = reps.len();
    let mut counts = vec![0u32; profiles * profiles.saturating_sub(1) / 2];
    let mut by_leaf: Vec<Vec<usize>> = Vec::new();
    for (t, tree) in forest.iter().enumerate() {
        by_leaf.clear();
        by_leaf.resize(tree.k(), Vec::new());
        for (p, sig) in reps.iter().enumerate() {
            by_leaf[sig[t] as usize].push(p);
        }
        for leaf in &by_leaf {
            for (a, &p) in leaf.iter().enumerate() {
                let row = tri_row(profiles, p);
                for &q in &leaf[a + 1..] {
                    counts[row + (q - p - 1)] += 1;
                }
            }
        }
    }
    counts
}

#[inline]
fn tri_row(n: usize, i: usize) -> usize {
    i * (2 * n - i - 1) / 2
}

fn max_depth(n: usize) -> usize {
    let mut d = 0;
    while (1usize << d) < n {
        d += 1;
    }
    d + DEPTH_SLACK
}

struct Node {
    members: Vec<u32>,
    depth: usize,
    open: bool,
}

/// Grows one tree with at most `max_leaves` leaves and returns the leaves as
/// a partition.
///
/// The largest open node is split next, ties going to the node holding the
/// smallest series index. A node closes when it has one member, reaches the
/// depth cap, or no separating pattern turns up in [`MAX_REDRAWS`] attempts.
pub fn grow_tree<R: Rng + ?Sized>(
    pm: &PresenceMatrix,
    max_leaves: usize,
    params: &SpfParams,
    rng: &mut R,
) -> Partition {
    let n = pm.rows();
    let cap = max_depth(n);
    let mut nodes = vec![Node {
        members: (0..n as u32).collect(),
        depth: 0,
        open: true,
    }];
    while nodes.len() < max_leaves {
        let next = nodes
            .iter()
            .enumerate()
            .filter(|(_, nd)| nd.open)
            .max_by(|(_, a), (_, b)| {
                a.members
                    .len()
                    .cmp(&b.members.len())
                    .then(b.members[0].cmp(&a.members[0]))
            })
            .map(|(i, _)| i);
        let Some(i) = next else { break };
        let node = &mut nodes[i];
        if node.members.len() < 2 || node.depth >= cap {
            node.open = false;
            continue;
        }
        let Some(col) = find_split(pm, &node.members, params.patterns_per_split, rng) else {
            node.open = false;
            continue;
        };
        let (present, absent): (Vec<u32>, Vec<u32>) =
            node.members.iter().partition(|&&m| pm.get(m as usize, col));
        let depth = node.depth + 1;
        node.members = present;
        node.depth = depth;
        nodes.push(Node {
            members: absent,
            depth,
            open: true,
        });
    }
    let mut leaf_of = vec![0usize; n];
    for (l, node) in nodes.iter().enumerate() {
        for &m in &node.members {
            leaf_of[m as usize] = l;
        }
    }
    Partition::from_ids(&leaf_of)
}

fn find_split<R: Rng + ?Sized>(
    pm: &PresenceMatrix,
    members: &[u32],
    per_split: usize,
    rng: &mut R,
) -> Option<usize> {
    for _ in 0..MAX_REDRAWS {
        let mut found = None;
        for _ in 0..per_split {
            let m = members[rng.random_range(0..members.len())] as usize;
            let tokens = pm.tokens(m);
            if tokens.is_empty() {
                continue;
            }
            let col = tokens[rng.random_range(0..tokens.len())] as usize;
            if found.is_none() && pm.separates(members, col) {
                found = Some(col);
            }
        }
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Random stream for tree `tree` of a forest seeded with `seed`.
pub fn tree_rng(seed: u64, tree: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tree as u64);
    rng
}

/// The leaf partitions of every tree of a forest grown towards `k` leaves.
pub fn grow_forest(pm: &PresenceMatrix, k: usize, params: &SpfParams) -> Vec<Partition> {
    (0..params.ensemble_size)
        .into_par_iter()
        .map(|t| grow_tree(pm, k, params, &mut tree_rng(params.rng_seed, t)))
        .collect()
}

/// Clusters one corpus at any number of clusters. Each `k` grows its own
/// forest from the same seed.
#[derive(Debug, Clone)]
pub struct SpfClusterer {
    pm: PresenceMatrix,
    params: SpfParams,
}

impl SpfClusterer {
    pub fn new(docs: &[SaxDocument], params: &SpfParams) -> Result<Self> {
        params.validate()?;
        Ok(Self::from_presence(presence_matrix(docs)?, params))
    }

    pub fn from_presence(pm: PresenceMatrix, params: &SpfParams) -> Self {
        SpfClusterer {
            pm,
            params: *params,
        }
    }

    pub fn presence(&self) -> &PresenceMatrix {
        &self.pm
    }

    pub fn params(&self) -> &SpfParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.pm.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.pm.rows() == 0
    }

    fn check_k(&self, k: usize) -> Result<()> {
        let n = self.len();
        if k < 2 || k > n {
            return Err(Error::InvalidK { k, n });
        }
        Ok(())
    }

    pub fn co_association(&self, k: usize) -> Result<CoAssociation> {
        self.check_k(k)?;
        let forest = grow_forest(&self.pm, k, &self.params);
        Ok(CoAssociation::from_forest(self.len(), &forest))
    }

    pub fn dendrogram(&self, k: usize) -> Result<Dendrogram> {
        Ok(average_linkage(&self.co_association(k)?))
    }

    pub fn cluster(&self, k: usize) -> Result<Partition> {
        Partition::new(self.dendrogram(k)?.cut(k))
    }
}

/// Clusters the documents into exactly `k` groups.
pub fn spf_cluster(docs: &[SaxDocument], k: usize, params: &SpfParams) -> Result<Partition> {
    let n = docs.len();
    if k < 2 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    SpfClusterer::new(docs, params)?.cluster(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn doc(id: &str, words: &[&str]) -> SaxDocument {
        SaxDocument::new(id, words.iter().map(|w| SaxWord::from(*w)).collect())
    }

    #[test]
    fn presence_examples() {
        let pm = presence_matrix(&[doc("1", &["ab", "ab"]), doc("2", &["ba"])]).unwrap();
        assert_eq!(pm.vocabulary(), &[SaxWord::from("ab"), SaxWord::from("ba")]);
        assert_eq!(pm.row(0), vec![true, false]);
        assert_eq!(pm.row(1), vec![false, true]);
        assert_eq!(pm.tokens(0), &[0, 0]);

        let pm = presence_matrix(&[doc("1", &["cc"]), doc("2", &["cc", "cc"]), doc("3", &["cc"])])
            .unwrap();
        assert_eq!(pm.columns(), 1);
        assert!((0..3).all(|r| pm.get(r, 0)));

        assert!(matches!(
            presence_matrix(&[doc("1", &[]), doc("2", &[])]),
            Err(Error::EmptyDocuments)
        ));
        assert!(presence_matrix(&[doc("1", &["a"])]).is_err());
    }

    #[test]
    fn presence_across_many_rows() {
        let docs: Vec<SaxDocument> = (0..130)
            .map(|i| doc(&i.to_string(), if i % 3 == 0 { &["x", "y"] } else { &["y"] }))
            .collect();
        let pm = presence_matrix(&docs).unwrap();
        for i in 0..130 {
            assert_eq!(pm.get(i, 0), i % 3 == 0);
            assert!(pm.get(i, 1));
        }
    }

    #[test]
    fn tree_on_disjoint_vocabularies() {
        let pm = presence_matrix(&[doc("1", &["aa"]), doc("2", &["bb"])]).unwrap();
        for seed in 0..20 {
            let p = grow_tree(&pm, 2, &SpfParams::default(), &mut tree_rng(seed, 0));
            assert_eq!(p.labels(), &[0, 1]);
        }
    }

    #[test]
    fn tree_on_identical_documents() {
        let docs: Vec<_> = (0..5).map(|i| doc(&i.to_string(), &["ab", "ba"])).collect();
        let pm = presence_matrix(&docs).unwrap();
        let p = grow_tree(&pm, 3, &SpfParams::default(), &mut tree_rng(3, 0));
        assert_eq!(p.k(), 1);
    }

    #[test]
    fn tree_on_two_blocks() {
        // rows (u, v): TT, TT, FF, FF. Either column splits {0,1} from {2,3},
        // after which nothing separates within a block.
        let vocab = vec![SaxWord::from("u"), SaxWord::from("v")];
        let rows = vec![
            vec![true, true],
            vec![true, true],
            vec![false, false],
            vec![false, false],
        ];
        let pm = PresenceMatrix::from_rows(vocab, &rows).unwrap();
        for seed in 0..50 {
            let p = grow_tree(&pm, 4, &SpfParams::default(), &mut tree_rng(seed, 7));
            assert_eq!(p.labels(), &[0, 0, 1, 1]);
        }
    }

    #[test]
    fn depth_cap_bounds_leaves() {
        // every series has a private word, so each split peels off one series
        // and only the depth cap stops the chain
        let docs: Vec<_> = (0..40).map(|i| doc(&i.to_string(), &[&format!("w{i:02}")])).collect();
        let pm = presence_matrix(&docs).unwrap();
        let p = grow_tree(&pm, 40, &SpfParams::default(), &mut tree_rng(1, 0));
        assert_eq!(p.k(), max_depth(40) + 1);
    }

    #[test]
    fn spf_cluster_edges() {
        let docs = vec![
            doc("0", &["aa", "ab"]),
            doc("1", &["ba", "bb"]),
            doc("2", &["aa"]),
            doc("3", &["bb"]),
        ];
        let params = SpfParams::default().with_ensemble_size(20);
        let p = spf_cluster(&docs, 4, &params).unwrap();
        assert_eq!(p.labels(), &[0, 1, 2, 3]);
        assert!(matches!(spf_cluster(&docs, 5, &params), Err(Error::InvalidK { .. })));
        assert!(matches!(spf_cluster(&docs, 1, &params), Err(Error::InvalidK { .. })));
    }

    #[test]
    fn two_groups_with_disjoint_vocabularies() {
        let mut docs = Vec::new();
        for i in 0..6 {
            docs.push(doc(&format!("a{i}"), &["aab", "aba", "aab"]));
            docs.push(doc(&format!("b{i}"), if i % 2 == 0 { &["cdd", "dcd"] } else { &["ccc"] }));
        }
        let expected: Vec<usize> = (0..12).map(|i| i % 2).collect();
        for seed in 0..10 {
            let p = spf_cluster(&docs, 2, &SpfParams::default().with_seed(seed)).unwrap();
            assert_eq!(p.labels(), expected.as_slice());
        }
    }

    #[test]
    fn co_association_basics() {
        let docs: Vec<_> = (0..9)
            .map(|i| doc(&i.to_string(), &[&format!("w{}", i % 3), &format!("v{}", i % 2)]))
            .collect();
        let clusterer = SpfClusterer::new(&docs, &SpfParams::default().with_seed(5)).unwrap();
        let co = clusterer.co_association(3).unwrap();
        for i in 0..9 {
            assert_eq!(co.get(i, i), 1.0);
            for j in 0..9 {
                assert_eq!(co.get(i, j), co.get(j, i));
                assert!((0.0..=1.0).contains(&co.get(i, j)));
            }
        }
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![0, 2]).is_err());
        assert_eq!(Partition::new(vec![1, 0, 1]).unwrap().k(), 2);
        let p = Partition::from_ids(&[7, 7, 3, 9, 3]);
        assert_eq!(p.labels(), &[0, 0, 1, 2, 1]);
        assert_eq!(p.sizes(), vec![2, 2, 1]);
    }

    fn random_presence() -> impl Strategy<Value = PresenceMatrix> {
        (2usize..30, 1usize..8).prop_flat_map(|(n, cols)| {
            prop::collection::vec(prop::collection::vec(any::<bool>(), cols), n).prop_map(
                move |rows| {
                    let vocab = (0..cols).map(|c| SaxWord::from(format!("w{c}").as_str())).collect();
                    PresenceMatrix::from_rows(vocab, &rows).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn trees_are_bounded_and_reproducible(pm in random_presence(), k in 2usize..8, seed in 0u64..1000) {
            let p = grow_tree(&pm, k, &SpfParams::default(), &mut tree_rng(seed, 0));
            prop_assert!(p.k() <= k);
            prop_assert_eq!(p.len(), pm.rows());
            prop_assert_eq!(&p, &grow_tree(&pm, k, &SpfParams::default(), &mut tree_rng(seed, 0)));
            // two series split apart must differ on some word
            for i in 0..pm.rows() {
                for j in 0..i {
                    if p.labels()[i] != p.labels()[j] {
                        prop_assert_ne!(pm.row(i), pm.row(j));
                    }
                }
            }
        }

        #[test]
        fn compressed_counts_match_dense(
            n in 2usize..15,
            trees in prop::collection::vec(prop::collection::vec(0u8..3, 15), 1..6)
        ) {
            let forest: Vec<Partition> = trees.iter().map(|t| Partition::from_ids(&t[..n])).collect();
            let co = CoAssociation::from_forest(n, &forest);
            for i in 0..n {
                for j in 0..n {
                    let dense = trees.iter().filter(|t| t[i] == t[j]).count() as u32;
                    prop_assert_eq!(co.count(i, j), dense);
                }
            }
        }

        #[test]
        fn count_strategies_agree(
            n in 2usize..40,
            trees in prop::collection::vec(prop::collection::vec(0u8..40, 40), 1..30)
        ) {
            let forest: Vec<Partition> = trees.iter().map(|t| Partition::from_ids(&t[..n])).collect();
            let sigs: Vec<Vec<u32>> = (0..n)
                .map(|i| forest.iter().map(|t| t.labels()[i] as u32).collect())
                .collect();
            let reps: Vec<&[u32]> = sigs.iter().map(Vec::as_slice).collect();
            prop_assert_eq!(pair_counts_bitset(&reps, &forest), pair_counts_grouped(&reps, &forest));
        }
    }
}
