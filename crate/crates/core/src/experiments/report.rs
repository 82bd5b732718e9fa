use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::ReplicationStats;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportEntry {
    pub scenario: String,
    pub method: String,
    pub metric: String,
    pub stats: ReplicationStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportMetadata {
    pub base_seed: u64,
    pub replications: u64,
    pub grid: Vec<f64>,
    /// Echo of the remaining settings (sample sizes, estimator options).
    pub settings: BTreeMap<String, String>,
}

/// Aggregated results of one demonstration, keyed by scenario and method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemoReport {
    pub demo_id: u8,
    pub entries: Vec<ReportEntry>,
    pub metadata: ReportMetadata,
}

/// One row of the long-format CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LongRow {
    pub demo: u8,
    pub scenario: String,
    pub method: String,
    pub metric: String,
    pub mean: f64,
    pub std: f64,
    pub n_reps: usize,
}

impl DemoReport {
    pub(crate) fn new(demo_id: u8, metadata: ReportMetadata) -> Self {
        Self {
            demo_id,
            entries: Vec::new(),
            metadata,
        }
    }

    pub(crate) fn push(
        &mut self,
        scenario: &str,
        method: &str,
        metric: &str,
        stats: ReplicationStats,
    ) {
        self.entries.push(ReportEntry {
            scenario: scenario.to_string(),
            method: method.to_string(),
            metric: metric.to_string(),
            stats,
        });
    }

    pub fn get(&self, scenario: &str, method: &str, metric: &str) -> Option<&ReplicationStats> {
        self.entries
            .iter()
            .find(|e| e.scenario == scenario && e.method == method && e.metric == metric)
            .map(|e| &e.stats)
    }

    pub fn scenarios(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for e in &self.entries {
            if !out.contains(&e.scenario.as_str()) {
                out.push(&e.scenario);
            }
        }
        out
    }

    /// Flattens the report. Entries evaluated against a truth also emit
    /// `bias`, `rmse` and `coverage` rows; their `std` column is the spread
    /// of the estimates (bias, rmse) or of the hit indicator (coverage).
    pub fn long_rows(&self) -> Vec<LongRow> {
        let mut rows = Vec::new();
        for e in &self.entries {
            let s = &e.stats;
            let row = |metric: &str, mean: f64, std: f64| LongRow {
                demo: self.demo_id,
                scenario: e.scenario.clone(),
                method: e.method.clone(),
                metric: metric.to_string(),
                mean,
                std,
                n_reps: s.n_reps,
            };
            rows.push(row(&e.metric, s.mean, s.std_dev));
            if let Some(bias) = s.bias {
                rows.push(row("bias", bias, s.std_dev));
            }
            if let Some(rmse) = s.rmse {
                rows.push(row("rmse", rmse, s.std_dev));
            }
            if let Some(c) = s.coverage {
                let n = s.n_reps as f64;
                let sd = if s.n_reps > 1 {
                    (c * (1.0 - c) * n / (n - 1.0)).sqrt()
                } else {
                    0.0
                };
                rows.push(row("coverage", c, sd));
            }
        }
        rows
    }
}

pub fn write_long_csv<W: Write>(rows: &[LongRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
    }
    if rows.is_empty() {
        w.write_record([
            "demo", "scenario", "method", "metric", "mean", "std", "n_reps",
        ])
        .map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::io("csv output", e))
}

pub fn read_long_csv<R: Read>(reader: R) -> Result<Vec<LongRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?;
    let expected = [
        "demo", "scenario", "method", "metric", "mean", "std", "n_reps",
    ];
    if !headers.iter().eq(expected) {
        return Err(Error::Parse(format!(
            "unexpected long-format header: {headers:?}"
        )));
    }
    rdr.deserialize()
        .map(|r| r.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}
