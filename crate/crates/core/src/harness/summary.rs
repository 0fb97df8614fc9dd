//! Distribution summaries and imbalance stratification.

use crate::cvi::Cvi;
use crate::error::{Error, Result};

use super::DatasetCorrelations;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
    pub count: usize,
}

/// Linear-interpolation quantile of sorted data (R type 7).
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

impl FiveNumber {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(Self {
            min: v[0],
            q1: quantile(&v, 0.25),
            median: quantile(&v, 0.5),
            q3: quantile(&v, 0.75),
            max: v[v.len() - 1],
            mean: v.iter().sum::<f64>() / v.len() as f64,
            count: v.len(),
        })
    }
}

/// Summary of each index's correlation distribution over a set of datasets.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSummary {
    pub label: String,
    pub per_cvi: Vec<(Cvi, Option<FiveNumber>)>,
}

pub fn summarize(label: &str, cvis: &[Cvi], rows: &[&DatasetCorrelations]) -> CorrelationSummary {
    let per_cvi = cvis
        .iter()
        .enumerate()
        .map(|(j, &cvi)| {
            let values: Vec<f64> = rows.iter().filter_map(|r| r.correlations[j]).collect();
            (cvi, FiveNumber::of(&values))
        })
        .collect();
    CorrelationSummary {
        label: label.to_string(),
        per_cvi,
    }
}

/// Display label of an imbalance stratum: `Bal.` for balanced data.
pub fn stratum_label(pct: u32) -> String {
    if pct == 0 {
        "Bal.".to_string()
    } else {
        format!("{pct}%")
    }
}

/// One summary per requested imbalance percentage, in the requested order.
pub fn stratify_by_imbalance(
    rows: &[DatasetCorrelations],
    cvis: &[Cvi],
    strata: &[u32],
) -> Result<Vec<CorrelationSummary>> {
    strata
        .iter()
        .map(|&pct| {
            let members: Vec<&DatasetCorrelations> =
                rows.iter().filter(|r| r.imbalance_pct == Some(pct)).collect();
            if pct > 90 || pct % 10 != 0 || members.is_empty() {
                return Err(Error::UnknownStratum(pct.to_string()));
            }
            Ok(summarize(&stratum_label(pct), cvis, &members))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::CurveIndex;

    fn row(id: &str, pct: Option<u32>, r: f64) -> DatasetCorrelations {
        DatasetCorrelations {
            dataset_id: id.into(),
            imbalance_pct: pct,
            imbalance_ratio: 1.0,
            correlations: vec![Some(r)],
        }
    }

    #[test]
    fn five_number_summary() {
        let s = FiveNumber::of(&[0.9, 0.2, 0.5]).unwrap();
        assert_eq!(s.median, 0.5);
        assert_eq!((s.min, s.max), (0.2, 0.9));
        assert_eq!(s.q1, 0.35);
        assert!((s.q3 - 0.7).abs() < 1e-15);
        assert!(FiveNumber::of(&[]).is_none());
    }

    #[test]
    fn strata_labels_and_membership() {
        let cvis = [Cvi::Curve(CurveIndex::Aucc)];
        let rows = vec![row("a", Some(0), 0.2), row("b", Some(0), 0.4), row("c", Some(50), 0.9)];
        let out = stratify_by_imbalance(&rows, &cvis, &[0, 50]).unwrap();
        assert_eq!(out[0].label, "Bal.");
        assert_eq!(out[1].label, "50%");
        assert!((out[0].per_cvi[0].1.unwrap().median - 0.3).abs() < 1e-15);
        assert!(matches!(stratify_by_imbalance(&rows, &cvis, &[70]), Err(Error::UnknownStratum(_))));
        assert!(stratify_by_imbalance(&rows, &cvis, &[55]).is_err());
    }

    #[test]
    fn single_stratum_equals_unstratified() {
        let cvis = [Cvi::Curve(CurveIndex::Aucc)];
        let rows = vec![row("a", Some(30), 0.2), row("b", Some(30), 0.5), row("c", Some(30), 0.9)];
        let strat = stratify_by_imbalance(&rows, &cvis, &[30]).unwrap();
        let all = summarize("all", &cvis, &rows.iter().collect::<Vec<_>>());
        assert_eq!(strat[0].per_cvi, all.per_cvi);
    }
}
