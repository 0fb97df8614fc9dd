//! Partition generators for the evaluation protocol.

mod hac;
mod kmeans;

use std::fmt;
use std::str::FromStr;

pub use hac::{cut_tree, hac_merge_tree, Linkage, Merge, MergeTree};
pub use kmeans::{kmeans, kmeans_with, KMeansConfig, KMeansFit};

use crate::dataset::{Dataset, Partition};
use crate::error::{Error, Result};
use crate::pairs::{euclidean_distances, Distances};

/// Stable algorithm tags used in result files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgorithmTag {
    KMeans,
    Hierarchical(Linkage),
}

impl AlgorithmTag {
    pub const ALL: [AlgorithmTag; 5] = [
        Self::KMeans,
        Self::Hierarchical(Linkage::Single),
        Self::Hierarchical(Linkage::Average),
        Self::Hierarchical(Linkage::Complete),
        Self::Hierarchical(Linkage::Ward),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::KMeans => "kmeans",
            Self::Hierarchical(l) => l.name(),
        }
    }
}

impl fmt::Display for AlgorithmTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "kmeans" {
            Ok(Self::KMeans)
        } else {
            s.parse().map(Self::Hierarchical)
        }
    }
}

/// Smallest integer `r` with `r * r >= n`.
pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Inclusive range of cluster counts evaluated for `n` objects.
pub fn k_range(n: usize) -> std::ops::RangeInclusive<usize> {
    2..=ceil_sqrt(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteEntry {
    pub algorithm: AlgorithmTag,
    pub k: usize,
    pub partition: Partition,
}

/// Runs one algorithm for a single `k`, computing distances when needed.
pub fn run_algorithm(
    data: &Dataset,
    algorithm: AlgorithmTag,
    k: usize,
    seed: u64,
) -> Result<Partition> {
    match algorithm {
        AlgorithmTag::KMeans => kmeans(data, k, seed, KMeansConfig::default().restarts),
        AlgorithmTag::Hierarchical(l) => {
            cut_tree(&hac_merge_tree(&euclidean_distances(data), l), k)
        }
    }
}

/// k-means plus the four linkage cuts for every `k` in `2..=ceil(sqrt(n))`.
pub fn partition_suite(data: &Dataset, seed: u64) -> Result<Vec<SuiteEntry>> {
    partition_suite_with(data, &euclidean_distances(data), seed)
}

pub fn partition_suite_with(data: &Dataset, d: &Distances, seed: u64) -> Result<Vec<SuiteEntry>> {
    let n = data.n_objects();
    if n < 9 {
        return Err(Error::InvalidDataset(format!(
            "the partition suite needs at least 9 objects, got {n}"
        )));
    }
    let trees: Vec<(Linkage, MergeTree)> = Linkage::ALL
        .into_iter()
        .map(|l| (l, hac_merge_tree(d, l)))
        .collect();
    let mut out = Vec::new();
    for k in k_range(n) {
        out.push(SuiteEntry {
            algorithm: AlgorithmTag::KMeans,
            k,
            partition: kmeans(data, k, seed.wrapping_add(k as u64), KMeansConfig::default().restarts)?,
        });
        for (l, tree) in &trees {
            out.push(SuiteEntry {
                algorithm: AlgorithmTag::Hierarchical(*l),
                k,
                partition: cut_tree(tree, k)?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_data(n: usize, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Dataset::from_rows((0..n).map(|_| vec![rng.random(), rng.random()]).collect()).unwrap()
    }

    #[test]
    fn ceil_sqrt_values() {
        assert_eq!(ceil_sqrt(9), 3);
        assert_eq!(ceil_sqrt(10), 4);
        assert_eq!(ceil_sqrt(100), 10);
        assert_eq!(ceil_sqrt(500), 23);
    }

    #[test]
    fn suite_sizes() {
        let s = partition_suite(&random_data(100, 1), 3).unwrap();
        assert_eq!(s.len(), 45);
        let s = partition_suite(&random_data(9, 2), 3).unwrap();
        assert_eq!(s.len(), 10);
        for e in &s {
            assert_eq!(e.partition.k(), e.k);
            assert!(e.partition.sizes().iter().all(|&c| c > 0));
        }
        assert!(partition_suite(&random_data(8, 2), 3).is_err());
    }

    #[test]
    fn tags_round_trip() {
        for tag in AlgorithmTag::ALL {
            assert_eq!(tag.name().parse::<AlgorithmTag>().unwrap(), tag);
        }
        assert!("dbscan".parse::<AlgorithmTag>().is_err());
    }
}
