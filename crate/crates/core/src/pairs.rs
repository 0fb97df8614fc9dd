//! Condensed storage over the `n(n-1)/2` unordered object pairs.
//!
//! Pairs are enumerated row-major over the strict upper triangle:
//! `(0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1)`.

use rayon::prelude::*;

use crate::dataset::{Dataset, Partition};
use crate::error::{Error, Result};

/// Number of unordered pairs among `n` objects.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn row_start(i: usize, n: usize) -> usize {
    i * n - i * (i + 1) / 2
}

/// Position of pair `(i, j)` in the canonical enumeration.
pub fn condensed_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if i >= j || j >= n {
        return Err(Error::InvalidPair { i, j, n });
    }
    Ok(row_start(i, n) + (j - i - 1))
}

/// Inverse of [`condensed_index`].
pub fn pair_at(p: usize, n: usize) -> Result<(usize, usize)> {
    if p >= pair_count(n) {
        return Err(Error::InvalidPair { i: p, j: p, n });
    }
    // Closed-form row estimate, corrected for rounding.
    let nf = n as f64;
    let disc = (2.0 * nf - 1.0).powi(2) - 8.0 * p as f64;
    let mut i = (((2.0 * nf - 1.0) - disc.max(0.0).sqrt()) / 2.0).floor() as usize;
    i = i.min(n - 2);
    while i > 0 && row_start(i, n) > p {
        i -= 1;
    }
    while row_start(i + 1, n) <= p {
        i += 1;
    }
    Ok((i, p - row_start(i, n) + i + 1))
}

/// A length-`n(n-1)/2` vector indexed by unordered object pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct CondensedPairVector<T> {
    n: usize,
    values: Vec<T>,
}

/// Pairwise distances.
pub type Distances = CondensedPairVector<f64>;
/// Pairwise similarities; larger means more alike.
pub type Similarities = CondensedPairVector<f64>;
/// Pairwise co-membership flags (`true` when both objects share a cluster).
pub type CoMembership = CondensedPairVector<bool>;

impl<T> CondensedPairVector<T> {
    pub fn new(n: usize, values: Vec<T>) -> Result<Self> {
        let expected = pair_count(n);
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: values.len(),
            });
        }
        Ok(Self { n, values })
    }

    pub fn n_objects(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Value for pair `(i, j)` in either order; `i != j`.
    pub fn get(&self, i: usize, j: usize) -> &T {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        &self.values[row_start(a, self.n) + (b - a - 1)]
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> CondensedPairVector<U> {
        CondensedPairVector {
            n: self.n,
            values: self.values.iter().map(f).collect(),
        }
    }
}

impl CondensedPairVector<bool> {
    pub fn positives(&self) -> usize {
        self.values.iter().filter(|&&b| b).count()
    }

    /// Flips every flag: the co-membership of the inverse problem.
    pub fn complement(&self) -> Self {
        self.map(|b| !b)
    }
}

impl std::ops::Neg for &CondensedPairVector<f64> {
    type Output = CondensedPairVector<f64>;

    fn neg(self) -> Self::Output {
        self.map(|v| -v)
    }
}

/// Euclidean distances between every pair of rows, computed row-parallel.
pub fn euclidean_distances(data: &Dataset) -> Distances {
    let n = data.n_objects();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = data.row(i);
            (i + 1..n)
                .map(|j| {
                    xi.iter()
                        .zip(data.row(j))
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                })
                .collect()
        })
        .collect();
    CondensedPairVector {
        n,
        values: rows.concat(),
    }
}

/// Pairwise distances under a caller-supplied metric.
pub fn distances_with(data: &Dataset, metric: impl Fn(&[f64], &[f64]) -> f64) -> Distances {
    let n = data.n_objects();
    let mut values = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i + 1..n {
            values.push(metric(data.row(i), data.row(j)));
        }
    }
    CondensedPairVector { n, values }
}

/// `s = -d`. Every curve index depends only on the similarity ranking, so any
/// strictly decreasing transform of `d` gives identical scores.
pub fn similarities_from_distances(d: &Distances) -> Similarities {
    -d
}

/// Flag per pair: `true` iff both objects carry the same label.
pub fn pairwise_co_membership(p: &Partition) -> CoMembership {
    let labels = p.labels();
    let n = labels.len();
    let mut values = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        let li = labels[i];
        values.extend(labels[i + 1..].iter().map(|&lj| lj == li));
    }
    CondensedPairVector { n, values }
}
