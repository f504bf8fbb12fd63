//! Average-linkage agglomeration over a co-association matrix.
//!
//! Similarities are integer tree counts, so the linkage value of two clusters
//! is the exact ratio `shared / (|A| * |B|)` and ties are detected exactly;
//! ties go to the pair with the smallest first-occurrence indices.
//!
//! Series with the same leaf in every tree (one profile) have similarity 1
//! and are merged before anything else. The remaining work runs on a dense
//! profile-by-profile matrix of pair sums, caching each cluster's best
//! partner so a merge only rescans rows that pointed at the merged pair.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::marker::PhantomData;
use std::ops::Mul;

use super::CoAssociation;

/// One agglomeration step. `left`/`right` are the first-occurrence indices
/// (smallest member) of the two clusters joined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    /// Average co-association of the two clusters, in [0, 1].
    pub similarity: f64,
}

/// The full merge sequence for `n` observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    n: usize,
    merges: Vec<Merge>,
}

impl Dendrogram {
    pub fn observations(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Cluster ids after applying the first `n - k` merges, numbered by
    /// first occurrence. `k` must lie in `1..=n`.
    pub fn cut(&self, k: usize) -> Vec<usize> {
        assert!(k >= 1 && k <= self.n, "cut at k={k} with n={}", self.n);
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for m in &self.merges[..self.n - k] {
            let a = find(&mut parent, m.left);
            let b = find(&mut parent, m.right);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
        let mut ids = vec![usize::MAX; self.n];
        let mut next = 0;
        (0..self.n)
            .map(|i| {
                let r = find(&mut parent, i);
                if ids[r] == usize::MAX {
                    ids[r] = next;
                    next += 1;
                }
                ids[r]
            })
            .collect()
    }
}

/// Best merge partner of a cluster, with the pair sum and the partner size
/// cached so comparisons avoid the matrix.
#[derive(Debug, Clone, Copy)]
struct Nearest {
    slot: usize,
    shared: u64,
    size: u64,
    rep: usize,
}

/// Unsigned type wide enough for the cross products of the ratio tests.
trait Wide: Copy + Ord + From<u64> + Mul<Output = Self> {}

impl Wide for u64 {}
impl Wide for u128 {}

#[inline]
fn mul<W: Wide>(a: u64, b: u64) -> W {
    W::from(a) * W::from(b)
}

/// Pair sums over one slot per profile, and the live clusters with their
/// sizes, reps and nearest partners stored side by side.
struct Agglomeration<W> {
    slots: usize,
    shared: Vec<u64>,
    /// Position of each live slot in the side-by-side vectors.
    position: Vec<usize>,
    live: Vec<usize>,
    size: Vec<u64>,
    rep: Vec<usize>,
    best: Vec<Nearest>,
    wide: PhantomData<W>,
}

impl<W: Wide> Agglomeration<W> {
    fn nearest(&self, a: usize) -> Nearest {
        // size of `a` is common to the whole row, and within a row the
        // smaller key is the partner with the smaller rep
        let row = &self.shared[a * self.slots..(a + 1) * self.slots];
        let mut best = Nearest {
            slot: usize::MAX,
            shared: 0,
            size: 1,
            rep: usize::MAX,
        };
        for ((&x, &size), &rep) in self.live.iter().zip(&self.size).zip(&self.rep) {
            if x == a {
                continue;
            }
            let lhs: W = mul(row[x], best.size);
            let rhs: W = mul(best.shared, size);
            if lhs > rhs || (lhs == rhs && rep < best.rep) || best.slot == usize::MAX {
                best = Nearest {
                    slot: x,
                    shared: row[x],
                    size,
                    rep,
                };
            }
        }
        best
    }

    fn key(&self, i: usize) -> (usize, usize) {
        let (x, y) = (self.rep[i], self.best[i].rep);
        (x.min(y), x.max(y))
    }

    /// Whether the live cluster at position `i` merging with its best partner
    /// comes before the one at `j` doing so: higher average similarity, then
    /// smaller key.
    fn before(&self, i: usize, j: usize) -> bool {
        let (ni, nj) = (&self.best[i], &self.best[j]);
        let lhs: W = mul(ni.shared, self.size[j] * nj.size);
        let rhs: W = mul(nj.shared, self.size[i] * ni.size);
        match lhs.cmp(&rhs) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => self.key(i) < self.key(j),
        }
    }

    /// Merges every profile into one cluster, appending the merges.
    fn run(mut self, trees: u64, merges: &mut Vec<Merge>) {
        let slots = self.slots;
        self.best = self.live.iter().map(|&a| self.nearest(a)).collect();
        while self.live.len() > 1 {
            let mut i = 0;
            for j in 1..self.live.len() {
                if self.before(j, i) {
                    i = j;
                }
            }
            let nb = self.best[i];
            let (left, right) = self.key(i);
            merges.push(Merge {
                left,
                right,
                similarity: nb.shared as f64 / (self.size[i] * nb.size * trees) as f64,
            });
            let j = self.position[nb.slot];
            let (pk, pg) = if self.rep[i] < self.rep[j] { (i, j) } else { (j, i) };
            let (keep, gone) = (self.live[pk], self.live[pg]);
            let grown = self.size[pk] + self.size[pg];
            self.live.swap_remove(pg);
            self.size.swap_remove(pg);
            self.rep.swap_remove(pg);
            self.best.swap_remove(pg);
            let pk = if pk == self.live.len() { pg } else { pk };
            if pg < self.live.len() {
                self.position[self.live[pg]] = pg;
            }
            self.size[pk] = grown;
            let keep_rep = self.rep[pk];
            // One pass: fold the merged rows, find the merged cluster's
            // partner, and offer it to everyone else.
            let mut kb = Nearest {
                slot: usize::MAX,
                shared: 0,
                size: 1,
                rep: usize::MAX,
            };
            for p in 0..self.live.len() {
                if p == pk {
                    continue;
                }
                let x = self.live[p];
                let s = self.shared[keep * slots + x] + self.shared[gone * slots + x];
                self.shared[keep * slots + x] = s;
                self.shared[x * slots + keep] = s;
                let (size, rep) = (self.size[p], self.rep[p]);
                let lhs: W = mul(s, kb.size);
                let rhs: W = mul(kb.shared, size);
                if lhs > rhs || (lhs == rhs && rep < kb.rep) || kb.slot == usize::MAX {
                    kb = Nearest {
                        slot: x,
                        shared: s,
                        size,
                        rep,
                    };
                }
                let bx = self.best[p];
                if bx.slot == keep || bx.slot == gone {
                    self.best[p] = self.nearest(x);
                    continue;
                }
                let lhs: W = mul(s, bx.size);
                let rhs: W = mul(bx.shared, grown);
                if lhs > rhs || (lhs == rhs && keep_rep < bx.rep) {
                    self.best[p] = Nearest {
                        slot: keep,
                        shared: s,
                        size: grown,
                        rep: keep_rep,
                    };
                }
            }
            self.best[pk] = kb;
        }
    }
}

pub fn average_linkage(co: &CoAssociation) -> Dendrogram {
    // Products compared are at most trees * n^4.
    let narrow = (co.len() as u128).pow(4).saturating_mul(co.trees().max(1) as u128) < u64::MAX as u128;
    if narrow {
        linkage_in::<u64>(co)
    } else {
        linkage_in::<u128>(co)
    }
}

fn linkage_in<W: Wide>(co: &CoAssociation) -> Dendrogram {
    let n = co.len();
    let trees = co.trees().max(1) as u64;
    let mut merges = Vec::with_capacity(n.saturating_sub(1));

    // Within-profile merges: every candidate has similarity 1, so they go
    // in ascending key order, and a profile's key is always (first, next).
    let members = co.profile_members();
    let mut pending: BinaryHeap<Reverse<(usize, usize, usize, usize)>> = members
        .iter()
        .enumerate()
        .filter(|(_, m)| m.len() > 1)
        .map(|(p, m)| Reverse((m[0], m[1], p, 1)))
        .collect();
    while let Some(Reverse((first, next, p, pos))) = pending.pop() {
        merges.push(Merge {
            left: first,
            right: next,
            similarity: 1.0,
        });
        if let Some(&after) = members[p].get(pos + 1) {
            pending.push(Reverse((first, after, p, pos + 1)));
        }
    }

    let slots = members.len();
    let size: Vec<u64> = members.iter().map(|m| m.len() as u64).collect();
    let mut shared = vec![0u64; slots * slots];
    for p in 0..slots {
        for q in p + 1..slots {
            shared[p * slots + q] = co.profile_count(p, q) as u64 * size[p] * size[q];
        }
    }
    // mirror in tiles to keep the transposed writes in cache
    const TILE: usize = 64;
    for p0 in (0..slots).step_by(TILE) {
        for q0 in (p0..slots).step_by(TILE) {
            for p in p0..(p0 + TILE).min(slots) {
                for q in q0.max(p + 1)..(q0 + TILE).min(slots) {
                    shared[q * slots + p] = shared[p * slots + q];
                }
            }
        }
    }
    Agglomeration::<W> {
        slots,
        shared,
        position: (0..slots).collect(),
        live: (0..slots).collect(),
        size,
        rep: members.iter().map(|m| m[0]).collect(),
        best: Vec::new(),
        wide: PhantomData,
    }
    .run(trees, &mut merges);
    Dendrogram { n, merges }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spf::Partition;
    use proptest::prelude::*;

    type Candidate = (u64, u64, (usize, usize), (usize, usize));

    /// Textbook greedy average linkage, recomputing every cluster pair from
    /// a dense count matrix at each step.
    fn naive_cut(counts: &[Vec<u32>], k: usize) -> Vec<usize> {
        let n = counts.len();
        let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        while clusters.len() > k {
            let mut best: Option<Candidate> = None;
            for x in 0..clusters.len() {
                for y in x + 1..clusters.len() {
                    let shared: u64 = clusters[x]
                        .iter()
                        .flat_map(|&i| clusters[y].iter().map(move |&j| (i, j)))
                        .map(|(i, j)| counts[i][j] as u64)
                        .sum();
                    let pairs = (clusters[x].len() * clusters[y].len()) as u64;
                    let rx = *clusters[x].iter().min().unwrap();
                    let ry = *clusters[y].iter().min().unwrap();
                    let key = (rx.min(ry), rx.max(ry));
                    let better = match best {
                        None => true,
                        Some((bs, bp, bkey, _)) => {
                            let l = shared as u128 * bp as u128;
                            let r = bs as u128 * pairs as u128;
                            l > r || (l == r && key < bkey)
                        }
                    };
                    if better {
                        best = Some((shared, pairs, key, (x, y)));
                    }
                }
            }
            let (_, _, _, (x, y)) = best.unwrap();
            let moved = clusters.remove(y);
            clusters[x].extend(moved);
        }
        let mut labels = vec![0; n];
        let mut order: Vec<&Vec<usize>> = clusters.iter().collect();
        order.sort_by_key(|c| *c.iter().min().unwrap());
        for (id, c) in order.into_iter().enumerate() {
            for &i in c {
                labels[i] = id;
            }
        }
        labels
    }

    fn dense_counts(n: usize, forest: &[Partition]) -> Vec<Vec<u32>> {
        let mut m = vec![vec![0; n]; n];
        for t in forest {
            let labels = t.labels();
            for (row, &a) in m.iter_mut().zip(labels) {
                for (cell, &b) in row.iter_mut().zip(labels) {
                    *cell += u32::from(a == b);
                }
            }
        }
        m
    }

    fn forest_from(ids: &[Vec<u8>]) -> Vec<Partition> {
        ids.iter().map(|t| Partition::from_ids(t)).collect()
    }

    #[test]
    fn block_structure() {
        let forest = forest_from(&[vec![0, 1, 0, 1], vec![5, 6, 5, 6]]);
        let d = average_linkage(&CoAssociation::from_forest(4, &forest));
        assert_eq!(d.cut(2), vec![0, 1, 0, 1]);
        assert_eq!(d.cut(4), vec![0, 1, 2, 3]);
        assert_eq!(d.cut(1), vec![0, 0, 0, 0]);
        assert_eq!(d.cut(3), vec![0, 1, 0, 2]);
    }

    #[test]
    fn disconnected_rest_merges_by_smallest_index() {
        let forest = forest_from(&[vec![0, 1, 2, 3]]);
        let d = average_linkage(&CoAssociation::from_forest(4, &forest));
        assert_eq!(d.cut(3), vec![0, 0, 1, 2]);
        assert_eq!(d.cut(2), vec![0, 0, 0, 1]);
    }

    proptest! {
        #[test]
        fn widths_agree(
            n in 2usize..30,
            trees in prop::collection::vec(prop::collection::vec(0u8..4, 30), 1..8)
        ) {
            let ids: Vec<Vec<u8>> = trees.iter().map(|t| t[..n].to_vec()).collect();
            let co = CoAssociation::from_forest(n, &forest_from(&ids));
            prop_assert_eq!(linkage_in::<u64>(&co), linkage_in::<u128>(&co));
        }

        #[test]
        fn matches_naive_greedy(
            n in 2usize..12,
            trees in prop::collection::vec(prop::collection::vec(0u8..3, 12), 1..5)
        ) {
            // few leaves and few trees make exact ties and shared profiles common
            let ids: Vec<Vec<u8>> = trees.iter().map(|t| t[..n].to_vec()).collect();
            let forest = forest_from(&ids);
            let d = average_linkage(&CoAssociation::from_forest(n, &forest));
            let counts = dense_counts(n, &forest);
            for k in 1..=n {
                prop_assert_eq!(d.cut(k), naive_cut(&counts, k), "k={}", k);
            }
        }
    }
}
