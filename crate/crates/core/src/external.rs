//! External agreement (ARI) and the correlation used to judge relative indices.

use std::collections::HashMap;

use crate::dataset::Partition;
use crate::error::{Error, Result};

fn choose2(v: u64) -> u128 {
    let v = v as u128;
    v * v.saturating_sub(1) / 2
}

/// Hubert-Arabie adjusted Rand index. Symmetric and invariant to label names.
pub fn adjusted_rand_index(p1: &Partition, p2: &Partition) -> Result<f64> {
    if p1.len() != p2.len() {
        return Err(Error::LengthMismatch {
            expected: p1.len(),
            actual: p2.len(),
        });
    }
    let mut contingency: HashMap<(usize, usize), u64> = HashMap::new();
    for (&a, &b) in p1.labels().iter().zip(p2.labels()) {
        *contingency.entry((a, b)).or_insert(0) += 1;
    }
    let index: u128 = contingency.values().map(|&c| choose2(c)).sum();
    let rows: u128 = p1.sizes().iter().map(|&s| choose2(s as u64)).sum();
    let cols: u128 = p2.sizes().iter().map(|&s| choose2(s as u64)).sum();
    let total = choose2(p1.len() as u64);

    let expected = (rows as f64) * (cols as f64) / total as f64;
    let max_index = 0.5 * (rows as f64 + cols as f64);
    if max_index == expected {
        return Err(Error::UndefinedAri);
    }
    Ok((index as f64 - expected) / (max_index - expected))
}

/// Pearson product-moment correlation.
pub fn pearson_correlation(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::UndefinedCorrelation("fewer than 3 observations"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("zero variance"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}
