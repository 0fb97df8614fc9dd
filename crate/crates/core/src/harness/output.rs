//! `records.csv`, `correlations.csv` and `report.csv`.

use std::io::Write;
use std::path::Path;

use crate::cvi::Cvi;
use crate::error::{Error, Result};

use super::{BenchmarkReport, CorrelationSummary, DatasetCorrelations, EvaluationRecord, ScoreMode};

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn finish(mut w: csv::Writer<std::fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Columns: `dataset,algorithm,k,ari,<index ids...>`.
pub fn write_records(path: &Path, cvis: &[Cvi], records: &[EvaluationRecord]) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["dataset".to_string(), "algorithm".into(), "k".into(), "ari".into()];
    header.extend(cvis.iter().map(|c| c.id().to_string()));
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![
            r.dataset_id.clone(),
            r.algorithm.name().to_string(),
            r.k.to_string(),
            fmt_opt(r.ari),
        ];
        row.extend(r.scores.iter().map(|&s| fmt_opt(s)));
        w.write_record(&row)?;
    }
    finish(w, path)
}

/// Columns: `dataset,imbalance_pct,imbalance_ratio,<index ids...>`.
pub fn write_correlations(path: &Path, report: &BenchmarkReport) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec![
        "dataset".to_string(),
        "imbalance_pct".into(),
        "imbalance_ratio".into(),
    ];
    header.extend(report.cvis.iter().map(|c| c.id().to_string()));
    w.write_record(&header)?;
    for d in &report.datasets {
        let mut row = vec![
            d.dataset_id.clone(),
            d.imbalance_pct.map(|p| p.to_string()).unwrap_or_default(),
            d.imbalance_ratio.to_string(),
        ];
        row.extend(d.correlations.iter().map(|&c| fmt_opt(c)));
        w.write_record(&row)?;
    }
    finish(w, path)
}

pub fn read_correlations(path: &Path) -> Result<(Vec<Cvi>, Vec<DatasetCorrelations>)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let headers = rdr.headers()?.clone();
    let parse_err = |line: u64, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    if headers.len() < 3 || &headers[0] != "dataset" {
        return Err(parse_err(1, "not a correlations file".into()));
    }
    let cvis = headers
        .iter()
        .skip(3)
        .map(str::parse)
        .collect::<Result<Vec<Cvi>>>()?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let num = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse()
                    .map(Some)
                    .map_err(|_| parse_err(line, format!("`{s}` is not a number")))
            }
        };
        let pct = if rec[1].is_empty() {
            None
        } else {
            Some(rec[1].parse().map_err(|_| parse_err(line, "bad imbalance_pct".into()))?)
        };
        rows.push(DatasetCorrelations {
            dataset_id: rec[0].to_string(),
            imbalance_pct: pct,
            imbalance_ratio: num(&rec[2])?.unwrap_or(f64::NAN),
            correlations: (3..rec.len()).map(|c| num(&rec[c])).collect::<Result<_>>()?,
        });
    }
    Ok((cvis, rows))
}

fn summary_rows<W: Write>(w: &mut csv::Writer<W>, s: &CorrelationSummary) -> Result<()> {
    for (cvi, five) in &s.per_cvi {
        let stats: [(&str, Option<f64>); 7] = [
            ("mean", five.map(|f| f.mean)),
            ("median", five.map(|f| f.median)),
            ("min", five.map(|f| f.min)),
            ("q1", five.map(|f| f.q1)),
            ("q3", five.map(|f| f.q3)),
            ("max", five.map(|f| f.max)),
            ("count", Some(five.map_or(0, |f| f.count) as f64)),
        ];
        for (name, v) in stats {
            w.write_record(["summary", &s.label, cvi.id(), name, &fmt_opt(v)])?;
        }
    }
    Ok(())
}

pub fn write_report(path: &Path, report: &BenchmarkReport) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_report_to(file, report).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// Long-format report with columns `section,stratum,cvi,key,value`.
pub fn write_report_to<W: Write>(out: W, report: &BenchmarkReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["section", "stratum", "cvi", "key", "value"])?;
    w.write_record(["meta", "", "", "orientation", report.mode.name()])?;
    w.write_record(["meta", "", "", "seed", &report.seed.to_string()])?;
    w.write_record(["meta", "", "", "alpha", &report.alpha.to_string()])?;
    w.write_record(["meta", "", "", "n_datasets", &report.datasets.len().to_string()])?;
    summary_rows(&mut w, &report.overall)?;
    if let Some(f) = &report.friedman {
        for (cvi, rank) in report.cvis.iter().zip(&f.mean_ranks) {
            w.write_record(["mean_rank", "all", cvi.id(), "mean_rank", &rank.to_string()])?;
        }
        let fields: [(&str, String); 5] = [
            ("statistic", f.statistic.to_string()),
            ("p_value", f.p_value.to_string()),
            ("critical_difference", f.critical_difference.to_string()),
            ("n_datasets", f.n_datasets().to_string()),
            ("n_cvis", f.n_methods().to_string()),
        ];
        for (k, v) in fields {
            w.write_record(["friedman", "all", "", k, &v])?;
        }
        for &(a, b) in &f.significant_pairs {
            let gap = f.mean_ranks[b] - f.mean_ranks[a];
            w.write_record(["significant", "all", report.cvis[a].id(), report.cvis[b].id(), &gap.to_string()])?;
        }
    }
    if let Some(strata) = &report.strata {
        for s in strata {
            summary_rows(&mut w, s)?;
        }
    }
    w.flush().map_err(|e| Error::io("<report>", e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportMeta {
    pub mode: ScoreMode,
    pub seed: u64,
    pub alpha: f64,
    /// Stratum labels present in the report, in file order.
    pub strata: Vec<String>,
}

pub fn read_report_meta(path: &Path) -> Result<ReportMeta> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let mut meta = ReportMeta {
        mode: ScoreMode::Oriented,
        seed: 0,
        alpha: 0.05,
        strata: Vec::new(),
    };
    let bad = |m: &str| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: m.to_string(),
    };
    for rec in rdr.records() {
        let rec = rec?;
        match (&rec[0], &rec[3]) {
            ("meta", "orientation") => meta.mode = ScoreMode::parse(&rec[4])?,
            ("meta", "seed") => meta.seed = rec[4].parse().map_err(|_| bad("bad seed"))?,
            ("meta", "alpha") => meta.alpha = rec[4].parse().map_err(|_| bad("bad alpha"))?,
            ("summary", _) if &rec[1] != "all" && !meta.strata.iter().any(|s| s == &rec[1]) => {
                meta.strata.push(rec[1].to_string())
            }
            _ => {}
        }
    }
    Ok(meta)
}
