//! CSV ingestion and emission for datasets and partitions.
//!
//! Dataset files carry a header row, one object per row, numeric feature
//! columns, an optional integer `label` column (ground truth) and an
//! optional `id` column. Partition files hold a single `label` column.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::dataset::{Dataset, Partition};
use crate::datagen::GenMetadata;
use crate::error::{Error, Result};

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    parse_err(path, line, e.to_string())
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    read_dataset_from(open(path)?, path)
}

/// Parses dataset CSV from any reader; `origin` names the source in diagnostics.
pub fn read_dataset_from<R: Read>(reader: R, origin: &Path) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_err(origin, e))?.clone();
    if headers.is_empty() {
        return Err(parse_err(origin, 1, "missing header row"));
    }
    let label_col = headers.iter().position(|h| h == "label");
    let id_col = headers.iter().position(|h| h == "id");
    let feature_cols: Vec<usize> = (0..headers.len())
        .filter(|&c| Some(c) != label_col && Some(c) != id_col)
        .collect();
    if feature_cols.is_empty() {
        return Err(parse_err(origin, 1, "no feature columns"));
    }

    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut ids = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_err(origin, e))?;
        let line = record.position().map_or(0, |p| p.line());
        for &c in &feature_cols {
            let field = &record[c];
            let v: f64 = field.parse().map_err(|_| {
                parse_err(origin, line, format!("column `{}`: `{field}` is not a number", &headers[c]))
            })?;
            if !v.is_finite() {
                return Err(parse_err(origin, line, format!("column `{}`: non-finite value", &headers[c])));
            }
            features.push(v);
        }
        if let Some(c) = label_col {
            let field = &record[c];
            let l: i64 = field.parse().map_err(|_| {
                parse_err(origin, line, format!("label `{field}` is not an integer"))
            })?;
            labels.push(l);
        }
        ids.push(match id_col {
            Some(c) => record[c].to_string(),
            None => (ids.len()).to_string(),
        });
    }
    let n = ids.len();
    let data = Dataset::with_ids(features, n, feature_cols.len(), ids)
        .map_err(|e| parse_err(origin, 0, e.to_string()))?;
    if label_col.is_some() {
        let truth = Partition::from_raw(&labels).map_err(|e| parse_err(origin, 0, format!("ground truth: {e}")))?;
        data.with_ground_truth(truth)
    } else {
        Ok(data)
    }
}

/// Writes `x0..x{m-1}` feature columns plus `label` when ground truth exists.
pub fn write_dataset(path: &Path, data: &Dataset) -> Result<()> {
    write_dataset_to(create(path)?, data).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn write_dataset_to<W: Write>(out: W, data: &Dataset) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let m = data.n_features();
    let truth = data.ground_truth();
    let default_ids = data.ids().iter().enumerate().all(|(i, id)| *id == i.to_string());
    let mut header: Vec<String> = Vec::new();
    if !default_ids {
        header.push("id".into());
    }
    header.extend((0..m).map(|f| format!("x{f}")));
    if truth.is_some() {
        header.push("label".into());
    }
    w.write_record(&header)?;
    for (i, row) in data.rows().enumerate() {
        let mut rec: Vec<String> = Vec::with_capacity(header.len());
        if !default_ids {
            rec.push(data.ids()[i].clone());
        }
        rec.extend(row.iter().map(|v| format!("{v:?}")));
        if let Some(t) = truth {
            rec.push(t.labels()[i].to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<dataset>", e))?;
    Ok(())
}

pub fn read_partition(path: &Path) -> Result<Partition> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(open(path)?);
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    let col = headers
        .iter()
        .position(|h| h == "label")
        .ok_or_else(|| parse_err(path, 1, "missing `label` header"))?;
    let mut labels = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = &record[col];
        labels.push(
            field
                .parse::<i64>()
                .map_err(|_| parse_err(path, line, format!("label `{field}` is not an integer")))?,
        );
    }
    Partition::from_raw(&labels).map_err(|e| parse_err(path, 0, e.to_string()))
}

pub fn write_partition(path: &Path, p: &Partition) -> Result<()> {
    let mut out = String::from("label\n");
    for l in p.labels() {
        out.push_str(&l.to_string());
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Sidecar path for a dataset file: `name.csv` → `name.meta.json`.
pub fn metadata_path(dataset_path: &Path) -> std::path::PathBuf {
    dataset_path.with_extension("meta.json")
}

pub fn write_metadata(path: &Path, meta: &GenMetadata) -> Result<()> {
    let text = serde_json::to_string_pretty(meta)?;
    std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_metadata(path: &Path) -> Result<GenMetadata> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
