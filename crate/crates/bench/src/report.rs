//! CSV and JSON report files.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use site_core::diagnostics::AuditReport;
use site_core::summary::{round_to, SummaryTable};
use site_core::types::MetricId;
use site_core::ScoreTable;

use crate::error::{Error, Result};
use crate::fsio;
use crate::scoring::{ScoreFailure, ScoreRecord};

/// Decimal places for tau and correlation columns.
pub const PRINTED_PLACES: i32 = 3;

pub fn fmt_rounded(x: f64) -> String {
    format!(
        "{:.*}",
        PRINTED_PLACES as usize,
        round_to(x, PRINTED_PLACES)
    )
}

fn csv_error(path: &Path, source: csv::Error) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    write_rows_with_header(path, rows, None)
}

/// `header` is required when `rows` may be empty and `T` is a struct.
fn write_rows_with_header<T: Serialize>(
    path: &Path,
    rows: &[T],
    header: Option<&[&str]>,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(header.is_none())
        .from_writer(Vec::new());
    if let Some(h) = header {
        w.write_record(h).map_err(|e| csv_error(path, e))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| csv_error(path, e))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::io(path, e.into_error()))?;
    fsio::write_atomic(path, &bytes)
}

pub fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let bytes = fsio::read(path)?;
    csv::Reader::from_reader(bytes.as_slice())
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| csv_error(path, e))
}

pub fn write_scores(path: &Path, records: &[ScoreRecord]) -> Result<()> {
    write_rows_with_header(
        path,
        records,
        Some(&["metric", "model", "dataset", "score", "converged"]),
    )
}

pub fn read_scores(path: &Path) -> Result<Vec<ScoreRecord>> {
    read_rows(path)
}

pub fn score_table(path: &Path) -> Result<ScoreTable> {
    let mut t = ScoreTable::new();
    for r in read_scores(path)? {
        t.insert(r.metric, &r.model, &r.dataset, r.score)
            .map_err(|source| Error::Data {
                path: path.to_path_buf(),
                source,
            })?;
    }
    Ok(t)
}

pub fn write_failures(path: &Path, failures: &[ScoreFailure]) -> Result<()> {
    write_rows_with_header(
        path,
        failures,
        Some(&["metric", "model", "dataset", "error"]),
    )
}

/// `metric,<dataset...>,Average`; cells rounded for printing, averages taken before rounding.
pub fn write_summary(path: &Path, table: &SummaryTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["metric".to_string()];
    header.extend(table.datasets.iter().cloned());
    header.push("Average".to_string());
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    for row in &table.rows {
        let mut rec = vec![row.label.clone()];
        rec.extend(row.cells.iter().map(|&c| fmt_rounded(c)));
        rec.push(fmt_rounded(row.average));
        w.write_record(&rec).map_err(|e| csv_error(path, e))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::io(path, e.into_error()))?;
    fsio::write_atomic(path, &bytes)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub metric: MetricId,
    pub dataset: String,
    /// Removed model ids joined by `|`, empty for the full pool.
    pub removed_prefix: String,
    pub tau_w: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityRow {
    pub metric: MetricId,
    pub dataset: String,
    /// Empty when the correlation is undefined.
    pub pearson_r: String,
    pub pair_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub model: String,
    pub score: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticScoreRow {
    pub model: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticTauRow {
    pub dataset: String,
    pub tau_w: String,
}

pub fn scatter_file_name(metric: MetricId, dataset: &str) -> String {
    format!("scatter_{metric}_{dataset}.csv")
}

pub fn write_audit(path: &Path, report: &AuditReport) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report).expect("audit report serializes");
    text.push('\n');
    fsio::write_atomic(path, text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_printed_to_three_places() {
        assert_eq!(fmt_rounded(0.04 / 6.0), "0.007");
        assert_eq!(fmt_rounded(-0.0001), "0.000");
        assert_eq!(fmt_rounded(0.91), "0.910");
    }

    #[test]
    fn scores_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scores.csv");
        let records = vec![
            ScoreRecord {
                metric: MetricId::LogMe,
                model: "a".into(),
                dataset: "d".into(),
                score: -0.123_456_789_012_345_67,
                converged: true,
            },
            ScoreRecord {
                metric: MetricId::Gbc,
                model: "b,c".into(),
                dataset: "d".into(),
                score: 1e-300,
                converged: false,
            },
        ];
        write_scores(&path, &records).unwrap();
        assert_eq!(read_scores(&path).unwrap(), records);
        write_scores(&path, &[]).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "metric,model,dataset,score,converged\n"
        );
    }
}
