//! Metric-by-dataset table of weighted tau with a row average.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::diagnostics::evaluate_metric;
use crate::error::{Error, Result};
use crate::types::{AccuracyTable, MetricId, ScoreTable};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub label: String,
    pub cells: Vec<f64>,
    /// Mean of the unrounded cells.
    pub average: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub datasets: Vec<String>,
    pub rows: Vec<SummaryRow>,
}

impl SummaryTable {
    pub fn from_cells(datasets: Vec<String>, rows: Vec<(String, Vec<f64>)>) -> Result<Self> {
        if datasets.is_empty() {
            return Err(Error::Invalid {
                field: "datasets",
                reason: "summary needs at least one dataset column".to_string(),
            });
        }
        let rows = rows
            .into_iter()
            .map(|(label, cells)| {
                if cells.len() != datasets.len() {
                    return Err(Error::LengthMismatch(datasets.len(), cells.len()));
                }
                if cells.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Invalid {
                        field: "cells",
                        reason: format!("non-finite cell in row {label}"),
                    });
                }
                let average = cells.iter().sum::<f64>() / cells.len() as f64;
                Ok(SummaryRow {
                    label,
                    cells,
                    average,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { datasets, rows })
    }

    /// Weighted tau for every (metric, dataset) cell over `models`.
    pub fn from_scores(
        scores: &ScoreTable,
        acc: &AccuracyTable,
        metrics: &[MetricId],
        datasets: &[String],
        models: &[String],
    ) -> Result<Self> {
        let rows = metrics
            .iter()
            .map(|&m| {
                let cells = datasets
                    .iter()
                    .map(|d| evaluate_metric(scores, acc, m, d, models))
                    .collect::<Result<Vec<f64>>>()?;
                Ok((m.as_str().to_string(), cells))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_cells(datasets.to_vec(), rows)
    }

    pub fn row(&self, label: &str) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

/// Rounds half away from zero to `places` decimals; never returns negative zero.
pub fn round_to(x: f64, places: i32) -> f64 {
    let scale = libm::pow(10.0, places as f64);
    let r = libm::round(x * scale) / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}
