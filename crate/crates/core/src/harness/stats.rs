//! Rank-based comparison of several indices over several datasets:
//! Friedman's test with the Nemenyi post-hoc critical difference.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Studentized range quantiles at infinite degrees of freedom divided by
/// `sqrt(2)`, for `c = 2..=20` compared methods.
const NEMENYI_Q_005: [f64; 19] = [
    1.959964, 2.343701, 2.569032, 2.727774, 2.849705, 2.948320, 3.030878, 3.101730, 3.163684,
    3.218654, 3.268004, 3.312739, 3.353618, 3.391230, 3.426041, 3.458425, 3.488685, 3.517073,
    3.543799,
];
const NEMENYI_Q_010: [f64; 19] = [
    1.644854, 2.052293, 2.291341, 2.459516, 2.588521, 2.692732, 2.779884, 2.854606, 2.919889,
    2.977768, 3.029694, 3.076733, 3.119693, 3.159199, 3.195743, 3.229723, 3.261461, 3.291224,
    3.319233,
];

pub fn nemenyi_q(c: usize, alpha: f64) -> Result<f64> {
    let table = if (alpha - 0.05).abs() < 1e-12 {
        &NEMENYI_Q_005
    } else if (alpha - 0.10).abs() < 1e-12 {
        &NEMENYI_Q_010
    } else {
        return Err(Error::UnsupportedAlpha(alpha));
    };
    if !(2..=20).contains(&c) {
        return Err(Error::Protocol(format!(
            "Nemenyi constants cover 2 to 20 methods, got {c}"
        )));
    }
    Ok(table[c - 2])
}

/// `q_alpha * sqrt(c (c + 1) / (6 N))`.
pub fn critical_difference(c: usize, n_datasets: usize, alpha: f64) -> Result<f64> {
    let q = nemenyi_q(c, alpha)?;
    let (c, n) = (c as f64, n_datasets as f64);
    Ok(q * (c * (c + 1.0) / (6.0 * n)).sqrt())
}

/// Ranks with 1 for the largest value; tied values share their average rank.
pub fn rank_descending(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

#[derive(Debug, Clone, PartialEq)]
pub struct FriedmanNemenyi {
    /// `ranks[dataset][method]`.
    pub ranks: Vec<Vec<f64>>,
    pub mean_ranks: Vec<f64>,
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub critical_difference: f64,
    /// Method index pairs `(better, worse)` whose mean ranks differ by more
    /// than the critical difference.
    pub significant_pairs: Vec<(usize, usize)>,
}

impl FriedmanNemenyi {
    pub fn n_datasets(&self) -> usize {
        self.ranks.len()
    }

    pub fn n_methods(&self) -> usize {
        self.mean_ranks.len()
    }
}

/// Friedman chi-square over a complete datasets × methods matrix of scores
/// (larger is better), followed by the Nemenyi critical difference.
pub fn friedman_nemenyi(matrix: &[Vec<Option<f64>>], alpha: f64) -> Result<FriedmanNemenyi> {
    let n = matrix.len();
    let c = matrix.first().map_or(0, Vec::len);
    if n < 2 || c < 2 {
        return Err(Error::Protocol(format!(
            "Friedman test needs at least 2 datasets and 2 methods, got {n} x {c}"
        )));
    }
    if let Some(bad) = matrix.iter().find(|r| r.len() != c) {
        return Err(Error::LengthMismatch {
            expected: c,
            actual: bad.len(),
        });
    }
    let missing = matrix.iter().flatten().filter(|v| v.is_none()).count();
    if missing > 0 {
        return Err(Error::IncompleteBlock { missing });
    }
    let cd = critical_difference(c, n, alpha)?;

    let ranks: Vec<Vec<f64>> = matrix
        .iter()
        .map(|row| rank_descending(&row.iter().map(|v| v.expect("checked")).collect::<Vec<_>>()))
        .collect();
    let mean_ranks: Vec<f64> = (0..c)
        .map(|j| ranks.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let (nf, cf) = (n as f64, c as f64);
    let sum_sq: f64 = mean_ranks.iter().map(|r| r * r).sum();
    let statistic = (12.0 * nf / (cf * (cf + 1.0)) * (sum_sq - cf * (cf + 1.0).powi(2) / 4.0)).max(0.0);
    let chi = ChiSquared::new(cf - 1.0).map_err(|e| Error::Protocol(e.to_string()))?;
    let p_value = chi.sf(statistic);

    let mut significant_pairs = Vec::new();
    for a in 0..c {
        for b in 0..c {
            if a != b && mean_ranks[b] - mean_ranks[a] > cd {
                significant_pairs.push((a, b));
            }
        }
    }
    Ok(FriedmanNemenyi {
        ranks,
        mean_ranks,
        statistic,
        p_value,
        alpha,
        critical_difference: cd,
        significant_pairs,
    })
}
