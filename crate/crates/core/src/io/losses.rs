use std::collections::BTreeMap;
use std::path::Path;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::conjugate::AnnualCounts;
use crate::error::{ensure, Error, Result};

/// One internal loss event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossRecord {
    pub event_date: NaiveDate,
    pub cell: String,
    pub gross_loss: f64,
    pub recovery: Option<f64>,
}

impl LossRecord {
    pub fn new(event_date: NaiveDate, cell: impl Into<String>, gross_loss: f64, recovery: Option<f64>) -> Result<Self> {
        ensure(gross_loss > 0.0 && gross_loss.is_finite(), || format!("gross loss must be > 0, got {gross_loss}"))?;
        if let Some(r) = recovery {
            ensure((0.0..=gross_loss).contains(&r), || {
                format!("recovery {r} must lie in [0, gross loss {gross_loss}]")
            })?;
        }
        Ok(Self { event_date, cell: cell.into(), gross_loss, recovery })
    }

    pub fn net_loss(&self) -> f64 {
        self.gross_loss - self.recovery.unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

/// Losses dropped because their gross amount is below the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSummary {
    pub threshold: f64,
    pub excluded: usize,
    pub excluded_amount: f64,
}

/// Result of reading a loss file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossData {
    pub records: Vec<LossRecord>,
    /// Events per calendar year per cell over the years spanned by all
    /// usable records, zero years included.
    pub counts: BTreeMap<String, BTreeMap<i32, u64>>,
    pub truncation: TruncationSummary,
    pub row_errors: Vec<RowError>,
}

impl LossData {
    pub fn cells(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }

    /// Counts for `cell` in year order.
    pub fn annual_counts(&self, cell: &str) -> Option<AnnualCounts> {
        self.counts.get(cell).map(|m| AnnualCounts::new(m.values().copied().collect()))
    }

    /// Gross loss amounts for `cell`.
    pub fn losses(&self, cell: &str) -> Vec<f64> {
        self.records.iter().filter(|r| r.cell == cell).map(|r| r.gross_loss).collect()
    }
}

#[derive(Debug, Deserialize)]
struct Row {
    date: String,
    cell: String,
    gross_loss: f64,
    recovery: Option<f64>,
}

/// Reads `date,cell,gross_loss,recovery` rows (ISO dates, recovery may be
/// empty). Bad rows are collected with their line numbers; only a file with
/// no usable rows is an error.
pub fn ingest_losses(path: impl AsRef<Path>, threshold: f64) -> Result<LossData> {
    let file = std::fs::File::open(path.as_ref())?;
    read_losses(file, threshold)
}

/// [`ingest_losses`] on any reader.
pub fn read_losses<R: std::io::Read>(reader: R, threshold: f64) -> Result<LossData> {
    ensure(threshold >= 0.0 && threshold.is_finite(), || format!("threshold must be >= 0, got {threshold}"))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(false).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse { line: 1, message: e.to_string() })?.clone();
    let expected = ["date", "cell", "gross_loss", "recovery"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Parse { line: 1, message: format!("header must be '{}'", expected.join(",")) });
    }

    let mut records = Vec::new();
    let mut row_errors = Vec::new();
    let mut truncation = TruncationSummary { threshold, excluded: 0, excluded_amount: 0.0 };
    for result in rdr.deserialize::<Row>() {
        let row = match result {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                row_errors.push(RowError { line, message: e.to_string() });
                continue;
            }
        };
        let line = records.len() as u64 + row_errors.len() as u64 + truncation.excluded as u64 + 2;
        let parsed = NaiveDate::parse_from_str(&row.date, "%Y-%m-%d")
            .map_err(|e| Error::InvalidParameter(format!("bad date '{}': {e}", row.date)))
            .and_then(|d| LossRecord::new(d, row.cell, row.gross_loss, row.recovery));
        match parsed {
            Ok(r) if r.gross_loss < threshold => {
                truncation.excluded += 1;
                truncation.excluded_amount += r.gross_loss;
            }
            Ok(r) => records.push(r),
            Err(e) => row_errors.push(RowError { line, message: e.to_string() }),
        }
    }

    if records.is_empty() {
        return Err(Error::EmptyData(format!(
            "no usable loss records ({} below threshold {}, {} malformed rows)",
            truncation.excluded,
            threshold,
            row_errors.len()
        )));
    }
    let counts = annual_counts_by_cell(&records);
    Ok(LossData { records, counts, truncation, row_errors })
}

fn annual_counts_by_cell(records: &[LossRecord]) -> BTreeMap<String, BTreeMap<i32, u64>> {
    let first = records.iter().map(|r| r.event_date.year()).min().expect("nonempty");
    let last = records.iter().map(|r| r.event_date.year()).max().expect("nonempty");
    let mut counts: BTreeMap<String, BTreeMap<i32, u64>> = BTreeMap::new();
    for r in records {
        counts
            .entry(r.cell.clone())
            .or_insert_with(|| (first..=last).map(|y| (y, 0)).collect())
            .entry(r.event_date.year())
            .and_modify(|c| *c += 1);
    }
    counts
}
