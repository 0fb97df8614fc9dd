use clustval::classic::ClassicIndex;
use clustval::curves::CurveIndex;
use clustval::datagen::{generate_synthetic, GenConfig};
use clustval::harness::{
    evaluate_dataset, read_correlations, read_report_meta, run_benchmark, write_correlations, write_report,
    BenchmarkConfig, BenchmarkInput, ScoreMode,
};
use clustval::Cvi;

fn inputs(count: usize) -> Vec<BenchmarkInput> {
    (0..count)
        .map(|i| {
            let pct = [0, 50][i % 2];
            let g = generate_synthetic(&GenConfig::new(120, 2 + i % 3, pct, 70 + i as u64)).unwrap();
            BenchmarkInput {
                id: format!("d{i}"),
                data: g.dataset,
                imbalance_pct: Some(pct),
            }
        })
        .collect()
}

fn cvis() -> Vec<Cvi> {
    vec![
        Cvi::Curve(CurveIndex::Aucc),
        Cvi::Curve(CurveIndex::Sauprc),
        Cvi::Classic(ClassicIndex::Swc),
        Cvi::Classic(ClassicIndex::Db),
        Cvi::Classic(ClassicIndex::CIndex),
    ]
}

#[test]
fn raw_mode_only_flips_minimized_indices() {
    let data = &inputs(1)[0].data;
    let oriented = evaluate_dataset("d", data, &cvis(), 5, ScoreMode::Oriented).unwrap();
    let raw = evaluate_dataset("d", data, &cvis(), 5, ScoreMode::Raw).unwrap();
    assert_eq!(oriented.len(), raw.len());
    for (o, r) in oriented.iter().zip(&raw) {
        assert_eq!((o.algorithm, o.k, o.ari), (r.algorithm, r.k, r.ari));
        for ((cvi, a), b) in cvis().iter().zip(&o.scores).zip(&r.scores) {
            match cvi {
                Cvi::Classic(ClassicIndex::Db | ClassicIndex::CIndex) => assert_eq!(*a, b.map(|v| -v)),
                _ => assert_eq!(a, b),
            }
        }
    }
}

#[test]
fn benchmark_is_deterministic_under_a_seed() {
    let data = inputs(4);
    let cfg = BenchmarkConfig::new(cvis(), 9);
    let (r1, a) = run_benchmark(&data, &cfg).unwrap();
    let (r2, b) = run_benchmark(&data, &cfg).unwrap();
    assert_eq!(r1, r2);
    assert_eq!(a.datasets, b.datasets);
    assert_eq!(a.friedman, b.friedman);
    assert!(r1.iter().all(|r| r.ari.is_some()));
}

#[test]
fn strata_and_artifacts_round_trip() {
    let data = inputs(4);
    let mut cfg = BenchmarkConfig::new(cvis(), 3);
    cfg.strata = Some(vec![0, 50]);
    cfg.mode = ScoreMode::Raw;
    let (_, report) = run_benchmark(&data, &cfg).unwrap();
    let labels: Vec<&str> = report.strata.as_ref().unwrap().iter().map(|s| s.label.as_str()).collect();
    assert_eq!(labels, ["Bal.", "50%"]);

    let dir = tempfile::tempdir().unwrap();
    let corr = dir.path().join("correlations.csv");
    let rep = dir.path().join("report.csv");
    write_correlations(&corr, &report).unwrap();
    write_report(&rep, &report).unwrap();
    let (ids, rows) = read_correlations(&corr).unwrap();
    assert_eq!(ids, cvis());
    assert_eq!(rows, report.datasets);
    let meta = read_report_meta(&rep).unwrap();
    assert_eq!((meta.mode, meta.seed, meta.alpha), (ScoreMode::Raw, 3, 0.05));
    assert_eq!(meta.strata, ["Bal.", "50%"]);
}

#[test]
fn single_dataset_has_no_friedman_block() {
    let (_, report) = run_benchmark(&inputs(1), &BenchmarkConfig::new(cvis(), 1)).unwrap();
    assert!(report.friedman.is_none());
    assert_eq!(report.datasets.len(), 1);
}
