#![allow(dead_code)]

use clustval::{CoMembership, Dataset, Partition, Similarities};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn uniform_dataset<R: Rng>(rng: &mut R, n: usize, m: usize) -> Dataset {
    let rows = (0..n)
        .map(|_| (0..m).map(|_| rng.random::<f64>()).collect())
        .collect();
    Dataset::from_rows(rows).unwrap()
}

/// A valid partition of `n` objects into `k` non-empty clusters.
pub fn random_partition<R: Rng>(rng: &mut R, n: usize, k: usize) -> Partition {
    let mut labels: Vec<usize> = (0..n).map(|i| if i < k { i } else { rng.random_range(0..k) }).collect();
    labels.shuffle(rng);
    Partition::new(labels).unwrap()
}

/// Distinct thresholds in descending order, built without sorting pair indices.
fn distinct_desc(s: &[f64]) -> Vec<f64> {
    let mut t: Vec<f64> = Vec::new();
    for &v in s {
        if !t.contains(&v) {
            t.push(v);
        }
    }
    t.sort_by(|a, b| b.partial_cmp(a).unwrap());
    t
}

/// Trapezoid over `(recall, precision)` points, anchored at recall 0 with the
/// first point's precision (or 0 when that point has no true positives).
fn trapezoid(points: &[(f64, f64, u64)]) -> f64 {
    let mut area = 0.0;
    let (_, p0, tp0) = points[0];
    let mut prev = (0.0, if tp0 > 0 { p0 } else { 0.0 });
    for &(r, p, _) in points {
        if r > prev.0 {
            area += (r - prev.0) * (p + prev.1) / 2.0;
        }
        prev = (r, p);
    }
    area
}

/// Precision-recall area recomputed from scratch at every threshold.
pub fn brute_auprc(s: &Similarities, c: &CoMembership) -> f64 {
    let (sv, cv) = (s.values(), c.values());
    let pos = cv.iter().filter(|&&b| b).count() as u64;
    let points: Vec<(f64, f64, u64)> = distinct_desc(sv)
        .into_iter()
        .map(|t| {
            let mut tp = 0u64;
            let mut fp = 0u64;
            for (v, &l) in sv.iter().zip(cv) {
                if *v >= t {
                    if l {
                        tp += 1
                    } else {
                        fp += 1
                    }
                }
            }
            (tp as f64 / pos as f64, tp as f64 / (tp + fp) as f64, tp)
        })
        .collect();
    trapezoid(&points)
}

/// Inverse precision-recall area: negatives are the target class and pairs at
/// or below each threshold are predicted negative.
pub fn brute_auiprc(s: &Similarities, c: &CoMembership) -> f64 {
    let (sv, cv) = (s.values(), c.values());
    let neg = cv.iter().filter(|&&b| !b).count() as u64;
    let mut thresholds = distinct_desc(sv);
    thresholds.reverse();
    let points: Vec<(f64, f64, u64)> = thresholds
        .into_iter()
        .map(|t| {
            let mut tn = 0u64;
            let mut fn_ = 0u64;
            for (v, &l) in sv.iter().zip(cv) {
                if *v <= t {
                    if l {
                        fn_ += 1
                    } else {
                        tn += 1
                    }
                }
            }
            (tn as f64 / neg as f64, tn as f64 / (tn + fn_) as f64, tn)
        })
        .collect();
    trapezoid(&points)
}

/// Probability that a random positive pair outranks a random negative pair,
/// ties counting one half.
pub fn rank_statistic(s: &Similarities, c: &CoMembership) -> f64 {
    let (sv, cv) = (s.values(), c.values());
    let mut wins = 0.0;
    let mut total = 0.0;
    for (a, &la) in sv.iter().zip(cv) {
        if !la {
            continue;
        }
        for (b, &lb) in sv.iter().zip(cv) {
            if lb {
                continue;
            }
            total += 1.0;
            if a > b {
                wins += 1.0;
            } else if a == b {
                wins += 0.5;
            }
        }
    }
    wins / total
}
