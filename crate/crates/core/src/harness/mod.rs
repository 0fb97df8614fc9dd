//! The correlation-based evaluation protocol.
//!
//! For each dataset with a reference partition: generate a suite of
//! partitions, score each one with every relative index and with ARI against
//! the reference, then correlate the two across the suite. Correlations are
//! aggregated over datasets, ranked, and compared with Friedman-Nemenyi.

mod output;
mod stats;
mod summary;

use rayon::prelude::*;

pub use output::{
    read_correlations, read_report_meta, write_correlations, write_records, write_report, write_report_to,
    ReportMeta,
};
pub use stats::{critical_difference, friedman_nemenyi, nemenyi_q, rank_descending, FriedmanNemenyi};
pub use summary::{stratify_by_imbalance, stratum_label, summarize, CorrelationSummary, FiveNumber};

use crate::algorithms::{partition_suite_with, AlgorithmTag};
use crate::cvi::{Cvi, Scorer};
use crate::dataset::Dataset;
use crate::datagen::imbalance_ratio;
use crate::error::{Error, Result};
use crate::external::{adjusted_rand_index, pearson_correlation};

/// Whether scores are correlated as computed or after flipping
/// minimize-direction indices so that larger is always better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreMode {
    #[default]
    Oriented,
    Raw,
}

impl ScoreMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Oriented => "oriented",
            Self::Raw => "raw",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "oriented" => Ok(Self::Oriented),
            "raw" => Ok(Self::Raw),
            other => Err(Error::Protocol(format!("unknown score mode `{other}`"))),
        }
    }
}

/// One partition's scores. `scores` is aligned with the evaluated index list;
/// `None` marks an index that is undefined for this partition.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationRecord {
    pub dataset_id: String,
    pub algorithm: AlgorithmTag,
    pub k: usize,
    pub scores: Vec<Option<f64>>,
    pub ari: Option<f64>,
}

pub fn evaluate_dataset(
    dataset_id: &str,
    data: &Dataset,
    cvis: &[Cvi],
    seed: u64,
    mode: ScoreMode,
) -> Result<Vec<EvaluationRecord>> {
    let truth = data
        .ground_truth()
        .ok_or_else(|| Error::Protocol(format!("dataset `{dataset_id}` has no ground truth")))?;
    let scorer = Scorer::new(data)?;
    let suite = partition_suite_with(data, scorer.distances(), seed)?;
    Ok(suite
        .par_iter()
        .map(|entry| {
            let scores = scorer
                .score_many(cvis, &entry.partition)
                .into_iter()
                .zip(cvis)
                .map(|(r, cvi)| {
                    r.ok().filter(|v| v.is_finite()).map(|v| match mode {
                        ScoreMode::Oriented => cvi.orient(v),
                        ScoreMode::Raw => v,
                    })
                })
                .collect();
            EvaluationRecord {
                dataset_id: dataset_id.to_string(),
                algorithm: entry.algorithm,
                k: entry.k,
                scores,
                ari: adjusted_rand_index(&entry.partition, truth).ok(),
            }
        })
        .collect())
}

/// Pearson correlation of each index's scores with ARI over one dataset's
/// records. Pairs with an undefined side are skipped; fewer than 3 usable
/// pairs or zero variance yields `None`.
pub fn correlate_per_dataset(records: &[EvaluationRecord], n_cvis: usize) -> Vec<Option<f64>> {
    (0..n_cvis)
        .map(|j| {
            let (xs, ys): (Vec<f64>, Vec<f64>) = records
                .iter()
                .filter_map(|r| Some((r.scores.get(j).copied().flatten()?, r.ari?)))
                .unzip();
            if xs.len() < 3 {
                return None;
            }
            pearson_correlation(&xs, &ys).ok()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetCorrelations {
    pub dataset_id: String,
    pub imbalance_pct: Option<u32>,
    /// Imbalance ratio of the reference partition.
    pub imbalance_ratio: f64,
    /// Aligned with the evaluated index list.
    pub correlations: Vec<Option<f64>>,
}

/// A dataset entering the benchmark.
#[derive(Debug, Clone)]
pub struct BenchmarkInput {
    pub id: String,
    pub data: Dataset,
    pub imbalance_pct: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct BenchmarkConfig {
    pub cvis: Vec<Cvi>,
    pub seed: u64,
    pub mode: ScoreMode,
    pub alpha: f64,
    /// Imbalance strata to summarize separately.
    pub strata: Option<Vec<u32>>,
}

impl BenchmarkConfig {
    pub fn new(cvis: Vec<Cvi>, seed: u64) -> Self {
        Self {
            cvis,
            seed,
            mode: ScoreMode::Oriented,
            alpha: 0.05,
            strata: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkReport {
    pub cvis: Vec<Cvi>,
    pub mode: ScoreMode,
    pub seed: u64,
    pub alpha: f64,
    pub datasets: Vec<DatasetCorrelations>,
    pub overall: CorrelationSummary,
    /// Friedman-Nemenyi over the datasets with no missing cell; `None` when
    /// fewer than two such datasets remain.
    pub friedman: Option<FriedmanNemenyi>,
    /// Dataset ids that entered the Friedman block.
    pub friedman_datasets: Vec<String>,
    pub strata: Option<Vec<CorrelationSummary>>,
}

impl BenchmarkReport {
    pub fn mean_rank(&self, cvi: Cvi) -> Option<f64> {
        let j = self.cvis.iter().position(|&c| c == cvi)?;
        self.friedman.as_ref().map(|f| f.mean_ranks[j])
    }

    pub fn stratum(&self, label: &str) -> Option<&CorrelationSummary> {
        self.strata.as_ref()?.iter().find(|s| s.label == label)
    }
}

/// Per-dataset seed: the master seed XOR the dataset's position.
pub fn dataset_seed(master: u64, index: usize) -> u64 {
    master ^ index as u64
}

pub fn run_benchmark(
    inputs: &[BenchmarkInput],
    cfg: &BenchmarkConfig,
) -> Result<(Vec<EvaluationRecord>, BenchmarkReport)> {
    let per_dataset: Vec<Result<(Vec<EvaluationRecord>, DatasetCorrelations)>> = inputs
        .par_iter()
        .enumerate()
        .map(|(i, input)| {
            let records = evaluate_dataset(
                &input.id,
                &input.data,
                &cfg.cvis,
                dataset_seed(cfg.seed, i),
                cfg.mode,
            )?;
            let correlations = correlate_per_dataset(&records, cfg.cvis.len());
            let truth = input.data.ground_truth().expect("checked by evaluate_dataset");
            Ok((
                records,
                DatasetCorrelations {
                    dataset_id: input.id.clone(),
                    imbalance_pct: input.imbalance_pct,
                    imbalance_ratio: imbalance_ratio(truth),
                    correlations,
                },
            ))
        })
        .collect();
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for item in per_dataset {
        let (r, c) = item?;
        records.extend(r);
        rows.push(c);
    }
    let report = build_report(rows, cfg)?;
    Ok((records, report))
}

/// Aggregates per-dataset correlations into a report.
pub fn build_report(rows: Vec<DatasetCorrelations>, cfg: &BenchmarkConfig) -> Result<BenchmarkReport> {
    let overall = summarize("all", &cfg.cvis, &rows.iter().collect::<Vec<_>>());
    let complete: Vec<&DatasetCorrelations> = rows
        .iter()
        .filter(|r| r.correlations.iter().all(Option::is_some))
        .collect();
    let friedman = if complete.len() >= 2 && cfg.cvis.len() >= 2 {
        let block: Vec<Vec<Option<f64>>> = complete.iter().map(|r| r.correlations.clone()).collect();
        Some(friedman_nemenyi(&block, cfg.alpha)?)
    } else {
        None
    };
    let friedman_datasets = if friedman.is_some() {
        complete.iter().map(|r| r.dataset_id.clone()).collect()
    } else {
        Vec::new()
    };
    let strata = match &cfg.strata {
        Some(levels) => Some(stratify_by_imbalance(&rows, &cfg.cvis, levels)?),
        None => None,
    };
    Ok(BenchmarkReport {
        cvis: cfg.cvis.clone(),
        mode: cfg.mode,
        seed: cfg.seed,
        alpha: cfg.alpha,
        datasets: rows,
        overall,
        friedman,
        friedman_datasets,
        strata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::ClassicIndex;
    use crate::curves::CurveIndex;
    use crate::datagen::{generate_synthetic, GenConfig};

    fn record(scores: Vec<Option<f64>>, ari: f64) -> EvaluationRecord {
        EvaluationRecord {
            dataset_id: "d".into(),
            algorithm: AlgorithmTag::KMeans,
            k: 2,
            scores,
            ari: Some(ari),
        }
    }

    #[test]
    fn correlation_cells() {
        let aris = [0.1, 0.5, 0.3, 0.9];
        let recs: Vec<EvaluationRecord> = aris
            .iter()
            .map(|&a| record(vec![Some(a), Some(-a), Some(1.0), None], a))
            .collect();
        let c = correlate_per_dataset(&recs, 4);
        assert!((c[0].unwrap() - 1.0).abs() < 1e-12);
        assert!((c[1].unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(c[2], None);
        assert_eq!(c[3], None);
    }

    #[test]
    fn orientation_flips_minimize_indices() {
        // A minimize index whose raw score equals -ARI correlates at +1 once oriented.
        let cvi = Cvi::Classic(ClassicIndex::Db);
        let aris = [0.2, 0.4, 0.1, 0.8, 0.6];
        let raw: Vec<EvaluationRecord> = aris.iter().map(|&a| record(vec![Some(-a)], a)).collect();
        let oriented: Vec<EvaluationRecord> =
            aris.iter().map(|&a| record(vec![Some(cvi.orient(-a))], a)).collect();
        let r_raw = correlate_per_dataset(&raw, 1)[0].unwrap();
        let r_or = correlate_per_dataset(&oriented, 1)[0].unwrap();
        assert!((r_raw + 1.0).abs() < 1e-12);
        assert!((r_or - 1.0).abs() < 1e-12);
        assert!((r_raw + r_or).abs() < 1e-12);
    }

    #[test]
    fn evaluation_requires_ground_truth() {
        let data = Dataset::from_rows((0..12).map(|i| vec![i as f64]).collect()).unwrap();
        let err = evaluate_dataset("x", &data, &Cvi::ALL, 0, ScoreMode::Oriented).unwrap_err();
        assert!(matches!(err, Error::Protocol(_)));
    }

    #[test]
    fn evaluation_shape_and_determinism() {
        let g = generate_synthetic(&GenConfig::new(100, 3, 0, 5)).unwrap();
        let cvis = [Cvi::Curve(CurveIndex::Sauprc), Cvi::Classic(ClassicIndex::Swc)];
        let a = evaluate_dataset("g", &g.dataset, &cvis, 9, ScoreMode::Oriented).unwrap();
        let b = evaluate_dataset("g", &g.dataset, &cvis, 9, ScoreMode::Oriented).unwrap();
        assert_eq!(a.len(), 45);
        assert!(a.iter().all(|r| r.scores.len() == 2));
        assert_eq!(a, b);
        // Well separated clusters: some suite member recovers the truth.
        assert!(a.iter().any(|r| r.ari == Some(1.0)));
    }
}
