//! Two-dimensional Gaussian clusters with overlap rejection and controlled
//! cluster-size imbalance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Partition};
use crate::error::{Error, Result};

/// Smallest variance ceiling tried before generation gives up.
pub const MIN_VARIANCE_CEILING: f64 = 1e-3;

/// How the drawn per-cluster spread value is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SpreadMode {
    /// The draw is a variance; the standard deviation is its square root.
    #[default]
    Variance,
    /// The draw is used directly as the standard deviation.
    StdDev,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n_objects: usize,
    pub k: usize,
    pub imbalance_pct: u32,
    pub seed: u64,
    pub center_range: (f64, f64),
    pub variance_range: (f64, f64),
    pub separation_factor: f64,
    pub max_attempts: usize,
    pub shrink_factor: f64,
    #[serde(default)]
    pub spread_mode: SpreadMode,
}

impl GenConfig {
    pub fn new(n_objects: usize, k: usize, imbalance_pct: u32, seed: u64) -> Self {
        Self {
            n_objects,
            k,
            imbalance_pct,
            seed,
            center_range: (0.0, 500.0),
            variance_range: (2.0, 50.0),
            separation_factor: 3.0,
            max_attempts: 10_000,
            shrink_factor: 0.95,
            spread_mode: SpreadMode::Variance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.k < 2 {
            return bad(format!("k must be at least 2, got {}", self.k));
        }
        if self.imbalance_pct > 90 || self.imbalance_pct % 10 != 0 {
            return bad(format!(
                "imbalance must be one of 0, 10, ..., 90; got {}",
                self.imbalance_pct
            ));
        }
        let (c0, c1) = self.center_range;
        let (v0, v1) = self.variance_range;
        if !(c0.is_finite() && c1.is_finite() && c0 < c1) {
            return bad(format!("empty center range [{c0}, {c1}]"));
        }
        if !(v0.is_finite() && v1.is_finite() && 0.0 < v0 && v0 <= v1) {
            return bad(format!("invalid variance range [{v0}, {v1}]"));
        }
        if !(self.shrink_factor > 0.0 && self.shrink_factor < 1.0) {
            return bad(format!("shrink factor must lie in (0, 1), got {}", self.shrink_factor));
        }
        if !(self.separation_factor >= 0.0) || self.max_attempts == 0 {
            return bad("separation factor must be non-negative and max_attempts positive".into());
        }
        let sizes = cluster_sizes(self.n_objects, self.k, self.imbalance_pct);
        if self.n_objects <= self.k || sizes.iter().any(|&s| s == 0) {
            return bad(format!(
                "{} objects cannot fill {} clusters at {}% imbalance",
                self.n_objects, self.k, self.imbalance_pct
            ));
        }
        Ok(())
    }

    fn std_dev(&self, spread: f64) -> f64 {
        match self.spread_mode {
            SpreadMode::Variance => spread.sqrt(),
            SpreadMode::StdDev => spread,
        }
    }
}

/// Cluster sizes: even split when `pct == 0`, otherwise cluster 0 receives
/// `round(n * pct / 100)` objects and the others split the rest evenly.
/// Remainders go to the lowest-indexed clusters.
pub fn cluster_sizes(n: usize, k: usize, pct: u32) -> Vec<usize> {
    fn even(total: usize, parts: usize) -> Vec<usize> {
        (0..parts)
            .map(|i| total / parts + usize::from(i < total % parts))
            .collect()
    }
    if k == 0 {
        return Vec::new();
    }
    if pct == 0 {
        return even(n, k);
    }
    let big = ((n as f64) * pct as f64 / 100.0).round() as usize;
    let big = big.min(n);
    let mut sizes = vec![big];
    sizes.extend(even(n - big, k - 1));
    sizes
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShrinkEvent {
    pub cluster: usize,
    pub new_ceiling: f64,
}

/// Realized generator state, written alongside the dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenMetadata {
    pub config: GenConfig,
    pub centers: Vec<[f64; 2]>,
    pub variances: Vec<f64>,
    pub sizes: Vec<usize>,
    pub shrink_events: Vec<ShrinkEvent>,
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub dataset: Dataset,
    pub metadata: GenMetadata,
}

pub fn generate_synthetic(cfg: &GenConfig) -> Result<Generated> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (c0, c1) = cfg.center_range;
    let (v0, v1) = cfg.variance_range;
    let mut ceiling = v1;
    let mut centers: Vec<[f64; 2]> = Vec::with_capacity(cfg.k);
    let mut spreads: Vec<f64> = Vec::with_capacity(cfg.k);
    let mut shrink_events = Vec::new();

    for cluster in 0..cfg.k {
        'rounds: loop {
            let floor = v0.min(ceiling);
            let spread = if ceiling > floor {
                rng.random_range(floor..=ceiling)
            } else {
                ceiling
            };
            let sigma = cfg.std_dev(spread);
            for _ in 0..cfg.max_attempts {
                let candidate = [rng.random_range(c0..=c1), rng.random_range(c0..=c1)];
                let clear = centers.iter().zip(&spreads).all(|(c, &s)| {
                    let gap = ((c[0] - candidate[0]).powi(2) + (c[1] - candidate[1]).powi(2)).sqrt();
                    gap >= cfg.separation_factor * (sigma + cfg.std_dev(s))
                });
                if clear {
                    centers.push(candidate);
                    spreads.push(spread);
                    break 'rounds;
                }
            }
            ceiling *= cfg.shrink_factor;
            if ceiling < MIN_VARIANCE_CEILING {
                return Err(Error::GenerationFailed(format!(
                    "could not place cluster {cluster} of {} without overlap",
                    cfg.k
                )));
            }
            shrink_events.push(ShrinkEvent {
                cluster,
                new_ceiling: ceiling,
            });
        }
    }

    let sizes = cluster_sizes(cfg.n_objects, cfg.k, cfg.imbalance_pct);
    let mut features = Vec::with_capacity(cfg.n_objects * 2);
    let mut labels = Vec::with_capacity(cfg.n_objects);
    for (cluster, &size) in sizes.iter().enumerate() {
        let sigma = cfg.std_dev(spreads[cluster]);
        let normal = Normal::new(0.0, sigma).map_err(|e| Error::GenerationFailed(e.to_string()))?;
        for _ in 0..size {
            features.push(centers[cluster][0] + normal.sample(&mut rng));
            features.push(centers[cluster][1] + normal.sample(&mut rng));
            labels.push(cluster);
        }
    }
    let dataset = Dataset::new(features, cfg.n_objects, 2)?.with_ground_truth(Partition::new(labels)?)?;
    Ok(Generated {
        dataset,
        metadata: GenMetadata {
            config: cfg.clone(),
            centers,
            variances: spreads,
            sizes,
            shrink_events,
        },
    })
}

/// Largest cluster size divided by the smallest.
pub fn imbalance_ratio(p: &Partition) -> f64 {
    let sizes = p.sizes();
    let max = *sizes.iter().max().expect("k >= 2");
    let min = *sizes.iter().min().expect("k >= 2");
    max as f64 / min as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_rule() {
        assert_eq!(cluster_sizes(500, 2, 90), vec![450, 50]);
        assert_eq!(cluster_sizes(500, 5, 0), vec![100; 5]);
        assert_eq!(cluster_sizes(500, 6, 90), vec![450, 10, 10, 10, 10, 10]);
        assert_eq!(cluster_sizes(10, 3, 0), vec![4, 3, 3]);
        assert_eq!(cluster_sizes(500, 22, 10).iter().sum::<usize>(), 500);
    }

    #[test]
    fn imbalance_ratio_examples() {
        let part = |sizes: &[usize]| {
            Partition::new(
                sizes
                    .iter()
                    .enumerate()
                    .flat_map(|(l, &s)| std::iter::repeat_n(l, s))
                    .collect(),
            )
            .unwrap()
        };
        assert_eq!(imbalance_ratio(&part(&[100, 100])), 1.0);
        assert_eq!(imbalance_ratio(&part(&[450, 50])), 9.0);
        assert_eq!(imbalance_ratio(&part(&[450, 10, 10, 10, 10, 10])), 45.0);
    }

    #[test]
    fn config_validation() {
        assert!(GenConfig::new(500, 1, 0, 0).validate().is_err());
        assert!(GenConfig::new(500, 3, 15, 0).validate().is_err());
        assert!(GenConfig::new(500, 3, 100, 0).validate().is_err());
        // 90% of 10 objects leaves one object for two clusters.
        assert!(GenConfig::new(10, 3, 90, 0).validate().is_err());
        let mut cfg = GenConfig::new(500, 3, 0, 0);
        cfg.center_range = (5.0, 5.0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn sizes_labels_and_determinism() {
        let cfg = GenConfig::new(500, 2, 90, 11);
        let a = generate_synthetic(&cfg).unwrap();
        let b = generate_synthetic(&cfg).unwrap();
        assert_eq!(a.dataset, b.dataset);
        assert_eq!(a.metadata, b.metadata);
        let truth = a.dataset.ground_truth().unwrap();
        assert_eq!(truth.sizes(), vec![450, 50]);
        assert_eq!(imbalance_ratio(truth), 9.0);
    }

    #[test]
    fn crowded_space_shrinks_then_fails() {
        let mut cfg = GenConfig::new(60, 6, 0, 3);
        cfg.center_range = (0.0, 10.0);
        cfg.max_attempts = 50;
        match generate_synthetic(&cfg) {
            Ok(g) => assert!(!g.metadata.shrink_events.is_empty()),
            Err(e) => assert!(matches!(e, Error::GenerationFailed(_))),
        }
        cfg.center_range = (0.0, 1e-6);
        cfg.shrink_factor = 0.5;
        assert!(matches!(generate_synthetic(&cfg), Err(Error::GenerationFailed(_))));
    }

    #[test]
    fn sample_variance_tracks_generating_variance() {
        let g = generate_synthetic(&GenConfig::new(1000, 4, 0, 21)).unwrap();
        let truth = g.dataset.ground_truth().unwrap();
        for (cluster, members) in truth.members().iter().enumerate() {
            assert!(members.len() >= 50);
            for axis in 0..2 {
                let xs: Vec<f64> = members.iter().map(|&i| g.dataset.row(i)[axis]).collect();
                let mean = xs.iter().sum::<f64>() / xs.len() as f64;
                let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
                let target = g.metadata.variances[cluster];
                assert!((var - target).abs() <= 0.25 * target, "cluster {cluster}: {var} vs {target}");
            }
        }
    }
}
