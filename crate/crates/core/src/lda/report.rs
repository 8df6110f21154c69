use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::model::{RiskCellModel, SimulationMode};
use super::simulate::{sample_mean, simulate_annual_loss, AnnualLossSample, SimulationConfig};
use super::var::var_quantile;
use crate::error::{ensure, Error, Result};

/// How per-cell losses are aggregated into the capital figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AggregationMode {
    /// Sum of per-cell VaRs (perfect dependence). For heavy tails this is
    /// not necessarily the most conservative choice.
    SumOfVars,
    /// VaR of the summed annual loss, all cells treated as one.
    SingleCell,
}

impl AggregationMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            AggregationMode::SumOfVars => "sum_of_vars",
            AggregationMode::SingleCell => "single_cell",
        }
    }
}

impl std::str::FromStr for AggregationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum_of_vars" => Ok(AggregationMode::SumOfVars),
            "single_cell" => Ok(AggregationMode::SingleCell),
            _ => Err(Error::InvalidParameter(format!("unknown aggregation mode '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellVar {
    pub label: String,
    pub var: f64,
    pub stderr: f64,
    pub expected_loss: f64,
}

/// Capital figure with its Monte Carlo error and everything needed to
/// reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapitalReport {
    pub q: f64,
    pub var: f64,
    pub mc_stderr: f64,
    pub expected_loss: f64,
    pub n_sims: usize,
    pub seed: u64,
    pub mode: SimulationMode,
    pub aggregation: AggregationMode,
    pub cells: Vec<CellVar>,
}

impl CapitalReport {
    /// Capital when expected loss is provisioned for separately.
    pub fn var_minus_expected_loss(&self) -> f64 {
        self.var - self.expected_loss
    }

    /// Key-value text, one `key = value` per line. Floats use the shortest
    /// representation that parses back to the same value.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("q", &self.q);
        kv("var", &self.var);
        kv("mc_stderr", &self.mc_stderr);
        kv("expected_loss", &self.expected_loss);
        kv("var_minus_expected_loss", &self.var_minus_expected_loss());
        kv("n_sims", &self.n_sims);
        kv("seed", &self.seed);
        kv("mode", &self.mode.as_str());
        kv("aggregation", &self.aggregation.as_str());
        kv("cells", &self.cells.len());
        for (i, c) in self.cells.iter().enumerate() {
            kv(&format!("cell.{i}.label"), &c.label);
            kv(&format!("cell.{i}.var"), &c.var);
            kv(&format!("cell.{i}.stderr"), &c.stderr);
            kv(&format!("cell.{i}.expected_loss"), &c.expected_loss);
        }
        s
    }
}

impl std::str::FromStr for CapitalReport {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut map = std::collections::HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once(" = ").ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected 'key = value', got '{line}'"),
            })?;
            map.insert(k.trim().to_string(), (i + 1, v.to_string()));
        }
        let get = |k: &str| {
            map.get(k)
                .ok_or_else(|| Error::Parse { line: 0, message: format!("missing key '{k}'") })
        };
        fn parse<T: std::str::FromStr>(entry: &(usize, String), key: &str) -> Result<T> {
            entry.1.trim().parse::<T>().map_err(|_| Error::Parse {
                line: entry.0,
                message: format!("bad value '{}' for '{key}'", entry.1),
            })
        }
        let n_cells: usize = parse(get("cells")?, "cells")?;
        let cells = (0..n_cells)
            .map(|i| {
                let key = |f: &str| format!("cell.{i}.{f}");
                Ok(CellVar {
                    label: get(&key("label"))?.1.clone(),
                    var: parse(get(&key("var"))?, &key("var"))?,
                    stderr: parse(get(&key("stderr"))?, &key("stderr"))?,
                    expected_loss: parse(get(&key("expected_loss"))?, &key("expected_loss"))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CapitalReport {
            q: parse(get("q")?, "q")?,
            var: parse(get("var")?, "var")?,
            mc_stderr: parse(get("mc_stderr")?, "mc_stderr")?,
            expected_loss: parse(get("expected_loss")?, "expected_loss")?,
            n_sims: parse(get("n_sims")?, "n_sims")?,
            seed: parse(get("seed")?, "seed")?,
            mode: get("mode")?.1.trim().parse()?,
            aggregation: get("aggregation")?.1.trim().parse()?,
            cells,
        })
    }
}

/// Simulates the cells and summarizes the annual-loss quantile at `q`.
pub fn compute_capital(
    cells: &[RiskCellModel],
    config: &SimulationConfig,
    q: f64,
    aggregation: AggregationMode,
) -> Result<CapitalReport> {
    let sample = simulate_annual_loss(cells, config)?;
    capital_from_sample(cells, &sample, config, q, aggregation)
}

/// Report from an existing simulation.
pub fn capital_from_sample(
    cells: &[RiskCellModel],
    sample: &AnnualLossSample,
    config: &SimulationConfig,
    q: f64,
    aggregation: AggregationMode,
) -> Result<CapitalReport> {
    ensure(cells.len() == sample.per_cell.len(), || "sample does not match the cells".into())?;
    let per_cell = cells
        .iter()
        .zip(&sample.per_cell)
        .map(|(c, xs)| {
            let v = var_quantile(xs, q)?;
            Ok(CellVar { label: c.label.clone(), var: v.value, stderr: v.stderr, expected_loss: sample_mean(xs) })
        })
        .collect::<Result<Vec<_>>>()?;
    let (var, mc_stderr) = match aggregation {
        AggregationMode::SumOfVars => (
            per_cell.iter().map(|c| c.var).sum(),
            // Cell estimates come from the same replicates; add errors
            // linearly rather than in quadrature.
            per_cell.iter().map(|c| c.stderr).sum(),
        ),
        AggregationMode::SingleCell => {
            let v = var_quantile(&sample.total, q)?;
            (v.value, v.stderr)
        }
    };
    Ok(CapitalReport {
        q,
        var,
        mc_stderr,
        expected_loss: sample_mean(&sample.total),
        n_sims: config.n_sims,
        seed: config.seed,
        mode: config.mode,
        aggregation,
        cells: per_cell,
    })
}
