//! Euclidean distances and the silhouette coefficient.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spf::Partition;
use crate::vectorize::FeatureMatrix;

/// Dense symmetric matrix of non-negative distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds a matrix from a full square array, checking symmetry and the
    /// zero diagonal.
    pub fn from_square(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    row: i,
                    expected: n,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        let dm = DistanceMatrix { n, data };
        for i in 0..n {
            if dm.get(i, i) != 0.0 {
                return Err(Error::Config(format!("distance diagonal at {i} is not zero")));
            }
            for j in 0..i {
                let d = dm.get(i, j);
                if d != dm.get(j, i) || d < 0.0 || !d.is_finite() {
                    return Err(Error::Config(format!("bad distance at ({i}, {j})")));
                }
            }
        }
        Ok(dm)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    fn from_rows_fn(n: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> Self {
        let upper: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| (i + 1..n).map(|j| f(i, j)).collect())
            .collect();
        let mut data = vec![0.0; n * n];
        for (i, row) in upper.into_iter().enumerate() {
            for (off, d) in row.into_iter().enumerate() {
                let j = i + 1 + off;
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        DistanceMatrix { n, data }
    }
}

/// Pairwise L2 distances between equal-length vectors.
pub fn euclidean_distances(rows: &[Vec<f64>]) -> Result<DistanceMatrix> {
    let dim = rows.first().map_or(0, Vec::len);
    if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
        return Err(Error::DimensionMismatch {
            row,
            expected: dim,
            found: r.len(),
        });
    }
    Ok(DistanceMatrix::from_rows_fn(rows.len(), |i, j| {
        rows[i]
            .iter()
            .zip(&rows[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }))
}

/// Pairwise L2 distances between the rows of a sparse feature matrix.
pub fn feature_distances(features: &FeatureMatrix) -> DistanceMatrix {
    let rows = features.sparse_rows();
    DistanceMatrix::from_rows_fn(rows.len(), |i, j| sparse_l2(&rows[i], &rows[j]))
}

fn sparse_l2(a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    let (mut x, mut y, mut acc) = (0, 0, 0.0);
    while x < a.len() && y < b.len() {
        let (ca, va) = a[x];
        let (cb, vb) = b[y];
        if ca == cb {
            acc += (va - vb) * (va - vb);
            x += 1;
            y += 1;
        } else if ca < cb {
            acc += va * va;
            x += 1;
        } else {
            acc += vb * vb;
            y += 1;
        }
    }
    acc += a[x..].iter().map(|&(_, v)| v * v).sum::<f64>();
    acc += b[y..].iter().map(|&(_, v)| v * v).sum::<f64>();
    acc.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SilhouetteReport {
    pub per_point: Vec<f64>,
    pub mean: f64,
}

/// Silhouette of every point: `(b - a) / max(a, b)`, where `a` is the mean
/// distance to the rest of its cluster and `b` the smallest mean distance to
/// another cluster. Members of singleton clusters score 0, as do points with
/// `max(a, b) = 0`.
pub fn silhouette(dm: &DistanceMatrix, partition: &Partition) -> Result<SilhouetteReport> {
    let k = partition.k();
    if k < 2 {
        return Err(Error::SilhouetteUndefined(k));
    }
    let n = dm.len();
    if partition.len() != n {
        return Err(Error::DimensionMismatch {
            row: 0,
            expected: n,
            found: partition.len(),
        });
    }
    let labels = partition.labels();
    let sizes = partition.sizes();
    let per_point: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let own = labels[i];
            if sizes[own] == 1 {
                return 0.0;
            }
            let mut sums = vec![0.0; k];
            for (j, &d) in dm.row(i).iter().enumerate() {
                sums[labels[j]] += d;
            }
            let a = sums[own] / (sizes[own] - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != own)
                .map(|c| sums[c] / sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let m = a.max(b);
            if m == 0.0 {
                0.0
            } else {
                (b - a) / m
            }
        })
        .collect();
    let mean = per_point.iter().sum::<f64>() / n as f64;
    Ok(SilhouetteReport { per_point, mean })
}
