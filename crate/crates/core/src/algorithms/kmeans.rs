//! Lloyd's k-means with k-means++ seeding and restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Dataset, Partition};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    pub restarts: usize,
    pub max_iter: usize,
    /// Stop once inertia improves by less than this fraction.
    pub tol: f64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            restarts: 10,
            max_iter: 300,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KMeansFit {
    pub partition: Partition,
    pub inertia: f64,
    /// Inertia of the partition after each iteration of the winning run.
    pub history: Vec<f64>,
}

/// Best-inertia k-means over `restarts` runs, deterministic in `seed`.
pub fn kmeans(data: &Dataset, k: usize, seed: u64, restarts: usize) -> Result<Partition> {
    let cfg = KMeansConfig {
        restarts,
        ..KMeansConfig::default()
    };
    Ok(kmeans_with(data, k, seed, &cfg)?.partition)
}

pub fn kmeans_with(data: &Dataset, k: usize, seed: u64, cfg: &KMeansConfig) -> Result<KMeansFit> {
    let n = data.n_objects();
    if k < 2 || k >= n {
        return Err(Error::InvalidK { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<usize>, f64, Vec<f64>)> = None;
    for _ in 0..cfg.restarts.max(1) {
        let (labels, history) = single_run(data, k, cfg, &mut rng);
        let inertia = *history.last().expect("at least one iteration");
        if best.as_ref().is_none_or(|(_, b, _)| inertia < *b) {
            best = Some((labels, inertia, history));
        }
    }
    let (labels, inertia, history) = best.expect("at least one restart");
    Ok(KMeansFit {
        partition: Partition::new(labels)?,
        inertia,
        history,
    })
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn plus_plus_init(data: &Dataset, k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = data.n_objects();
    let m = data.n_features();
    let mut centers = Vec::with_capacity(k * m);
    centers.extend_from_slice(data.row(rng.random_range(0..n)));
    let mut closest: Vec<f64> = data.rows().map(|r| sq_dist(r, &centers[..m])).collect();
    for _ in 1..k {
        let total: f64 = closest.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &w) in closest.iter().enumerate() {
                if target < w {
                    chosen = i;
                    break;
                }
                target -= w;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        let c = data.row(pick).to_vec();
        for (i, row) in data.rows().enumerate() {
            closest[i] = closest[i].min(sq_dist(row, &c));
        }
        centers.extend(c);
    }
    centers
}

fn single_run(
    data: &Dataset,
    k: usize,
    cfg: &KMeansConfig,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, Vec<f64>) {
    let n = data.n_objects();
    let m = data.n_features();
    let mut centers = plus_plus_init(data, k, rng);
    let mut labels = vec![usize::MAX; n];
    let mut history = Vec::new();
    for _ in 0..cfg.max_iter.max(1) {
        let mut changed = false;
        let mut cost = vec![0.0; n];
        for (i, row) in data.rows().enumerate() {
            let (best, best_d) = (0..k)
                .map(|c| (c, sq_dist(row, &centers[c * m..(c + 1) * m])))
                .fold((0, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc });
            if labels[i] != best {
                changed = true;
                labels[i] = best;
            }
            cost[i] = best_d;
        }
        changed |= repair_empty(&mut labels, &mut cost, k);
        centers = centroids(data, &labels, k);
        let inertia: f64 = data
            .rows()
            .zip(&labels)
            .map(|(r, &l)| sq_dist(r, &centers[l * m..(l + 1) * m]))
            .sum();
        let prev = history.last().copied();
        history.push(inertia);
        if !changed {
            break;
        }
        if let Some(prev) = prev {
            if prev - inertia <= cfg.tol * prev {
                break;
            }
        }
    }
    (labels, history)
}

/// Moves the point farthest from its center into each empty cluster.
fn repair_empty(labels: &mut [usize], cost: &mut [f64], k: usize) -> bool {
    let mut sizes = vec![0usize; k];
    for &l in labels.iter() {
        sizes[l] += 1;
    }
    let mut changed = false;
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let donor = (0..labels.len())
            .filter(|&i| sizes[labels[i]] > 1)
            .max_by(|&a, &b| cost[a].total_cmp(&cost[b]).then(b.cmp(&a)))
            .expect("n > k guarantees a cluster with two members");
        sizes[labels[donor]] -= 1;
        sizes[empty] = 1;
        labels[donor] = empty;
        cost[donor] = 0.0;
        changed = true;
    }
    changed
}

fn centroids(data: &Dataset, labels: &[usize], k: usize) -> Vec<f64> {
    let m = data.n_features();
    let mut sums = vec![0.0; k * m];
    let mut counts = vec![0usize; k];
    for (row, &l) in data.rows().zip(labels) {
        counts[l] += 1;
        for (f, &v) in row.iter().enumerate() {
            sums[l * m + f] += v;
        }
    }
    for (l, &c) in counts.iter().enumerate() {
        sums[l * m..(l + 1) * m].iter_mut().for_each(|v| *v /= c as f64);
    }
    sums
}
