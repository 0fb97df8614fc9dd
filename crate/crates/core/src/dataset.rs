//! Datasets and hard partitions.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

/// `n` objects described by `m` real features, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    n: usize,
    m: usize,
    ids: Vec<String>,
    ground_truth: Option<Partition>,
}

impl Dataset {
    /// Builds a dataset from row vectors. Object ids default to the row index.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut features = Vec::with_capacity(n * m);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidDataset(format!(
                    "row {i} has {} features, expected {m}",
                    row.len()
                )));
            }
            features.extend(row);
        }
        Self::new(features, n, m)
    }

    /// Builds a dataset from a row-major feature buffer of `n * m` values.
    pub fn new(features: Vec<f64>, n: usize, m: usize) -> Result<Self> {
        let ids = (0..n).map(|i| i.to_string()).collect();
        Self::with_ids(features, n, m, ids)
    }

    pub fn with_ids(features: Vec<f64>, n: usize, m: usize, ids: Vec<String>) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidDataset(format!("need at least 3 objects, got {n}")));
        }
        if m < 1 {
            return Err(Error::InvalidDataset("need at least one feature".into()));
        }
        if features.len() != n * m {
            return Err(Error::LengthMismatch {
                expected: n * m,
                actual: features.len(),
            });
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite feature value at object {}, feature {}",
                pos / m,
                pos % m
            )));
        }
        if ids.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: ids.len(),
            });
        }
        let mut seen = HashSet::with_capacity(n);
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidDataset(format!("duplicate object id `{id}`")));
            }
        }
        Ok(Self {
            features,
            n,
            m,
            ids,
            ground_truth: None,
        })
    }

    /// Attaches reference labels. The partition must cover the same objects.
    pub fn with_ground_truth(mut self, truth: Partition) -> Result<Self> {
        if truth.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: truth.len(),
            });
        }
        self.ground_truth = Some(truth);
        Ok(self)
    }

    pub fn n_objects(&self) -> usize {
        self.n
    }

    pub fn n_features(&self) -> usize {
        self.m
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.chunks_exact(self.m)
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn ground_truth(&self) -> Option<&Partition> {
        self.ground_truth.as_ref()
    }

    /// Returns a copy with every feature multiplied by `scale` and shifted by `shift`.
    pub fn affine(&self, scale: f64, shift: f64) -> Result<Self> {
        let features = self.features.iter().map(|v| v * scale + shift).collect();
        let mut out = Self::with_ids(features, self.n, self.m, self.ids.clone())?;
        out.ground_truth = self.ground_truth.clone();
        Ok(out)
    }
}

/// A hard partition of `n` objects into `k` non-empty, disjoint clusters
/// with `2 <= k <= n - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Validates labels in `[0, k)` where `k = max + 1`; every index must occur.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        let k = labels.iter().max().map_or(0, |&m| m + 1);
        if k < 2 || k + 1 > n {
            return Err(Error::InvalidK { k, n });
        }
        let mut sizes = vec![0usize; k];
        for &l in &labels {
            sizes[l] += 1;
        }
        if let Some(empty) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidPartition(format!(
                "cluster {empty} of {k} is empty"
            )));
        }
        Ok(Self { labels, k })
    }

    /// Relabels arbitrary cluster identifiers to `0..k` in order of first
    /// appearance, then validates.
    pub fn from_raw<T: Eq + std::hash::Hash + Clone>(raw: &[T]) -> Result<Self> {
        let mut map: HashMap<T, usize> = HashMap::new();
        let labels = raw
            .iter()
            .map(|r| {
                let next = map.len();
                *map.entry(r.clone()).or_insert(next)
            })
            .collect();
        Self::new(labels)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Number of unordered pairs whose objects share a cluster.
    pub fn within_pairs(&self) -> u64 {
        self.sizes()
            .iter()
            .map(|&s| (s as u64) * (s as u64).saturating_sub(1) / 2)
            .sum()
    }

    /// Member indices grouped by cluster.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    /// Same partition with labels renumbered by first appearance.
    pub fn canonical(&self) -> Self {
        Self::from_raw(&self.labels).expect("relabeling preserves validity")
    }
}
