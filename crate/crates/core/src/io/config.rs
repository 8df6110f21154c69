//! TOML documents describing scenarios, expert input and risk cells.
//!
//! Scenario file:
//!
//! ```toml
//! [elicited_interval]          # expert view of a Poisson intensity
//! mean = 0.5
//! lower = 0.25
//! upper = 0.75
//! coverage = 0.6667
//!
//! [[exceedance]]               # "a loss of 1e6 or more every 10 years"
//! amount = 1e6
//! every_years = 10
//! interpretation = "mean_recurrence"   # or "median"
//!
//! [experts]
//! opinions = [0.4, 0.55, 0.7]
//! xi = 0.2                     # or "estimate"
//!
//! [dirichlet]
//! concentration = 10
//! knots = [0, 100]
//! values = [0, 1]
//! interpolation = "linear"     # or "step"
//!
//! [[ds_structure]]
//! name = "a"
//! kind = "sure"                # or "statistical 0.95"
//! elements = [[5, 20, 0.5], [10, 25, 0.5]]
//! ```
//!
//! Every section is optional; every key inside a present section is
//! required. Unknown keys are rejected.
//!
//! Cells file:
//!
//! ```toml
//! [[cell]]
//! label = "retail"
//! frequency = { poisson = { lambda = 10 } }
//! severity = { lognormal = { mu = 0, sigma = 2 } }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::conjugate::ElicitedInterval;
use crate::dirichlet::DirichletPrior;
use crate::distributions::{Interpolation, StepDistribution};
use crate::error::{ensure, Error, Result};
use crate::evidence::{BoundKind, DempsterShaferStructure, FocalElement};
use crate::lda::{FrequencyModel, RiskCellModel, SeverityModel};
use crate::three_source::ExpertIntensityOpinions;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub elicited_interval: Option<IntervalSection>,
    #[serde(default)]
    pub exceedance: Vec<ExceedanceStatement>,
    pub experts: Option<ExpertsSection>,
    pub dirichlet: Option<DirichletSection>,
    #[serde(default)]
    pub ds_structure: Vec<DsSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalSection {
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
    pub coverage: f64,
}

impl IntervalSection {
    pub fn to_interval(&self) -> Result<ElicitedInterval> {
        ElicitedInterval::new(self.mean, self.lower, self.upper, self.coverage)
    }
}

/// How the period `d` of an exceedance statement is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecurrenceInterpretation {
    /// `d` is the mean time between exceedances: rate `1/d`.
    MeanRecurrence,
    /// Even odds of at least one exceedance within `d` years: rate `ln 2 / d`.
    Median,
}

impl RecurrenceInterpretation {
    pub fn as_str(&self) -> &'static str {
        match self {
            RecurrenceInterpretation::MeanRecurrence => "mean_recurrence",
            RecurrenceInterpretation::Median => "median",
        }
    }
}

impl std::str::FromStr for RecurrenceInterpretation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean_recurrence" => Ok(RecurrenceInterpretation::MeanRecurrence),
            "median" => Ok(RecurrenceInterpretation::Median),
            _ => Err(Error::InvalidParameter(format!("unknown recurrence interpretation '{s}'"))),
        }
    }
}

/// "A loss of `amount` or higher is expected every `every_years` years."
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExceedanceStatement {
    pub amount: f64,
    pub every_years: f64,
    pub interpretation: RecurrenceInterpretation,
}

impl ExceedanceStatement {
    pub fn new(amount: f64, every_years: f64, interpretation: RecurrenceInterpretation) -> Result<Self> {
        let s = Self { amount, every_years, interpretation };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.amount > 0.0 && self.amount.is_finite(), || {
            format!("exceedance amount must be > 0, got {}", self.amount)
        })?;
        ensure(self.every_years > 0.0 && self.every_years.is_finite(), || {
            format!("recurrence period must be > 0, got {}", self.every_years)
        })
    }

    /// Annual rate of losses at or above `amount`.
    pub fn rate(&self) -> f64 {
        match self.interpretation {
            RecurrenceInterpretation::MeanRecurrence => 1.0 / self.every_years,
            RecurrenceInterpretation::Median => std::f64::consts::LN_2 / self.every_years,
        }
    }

    /// Severity cdf value at `amount` implied by intensity `lambda`:
    /// `F(L) = 1 - rate / lambda`.
    pub fn severity_level(&self, lambda: f64) -> Result<f64> {
        let r = self.rate();
        ensure(lambda > r, || {
            format!("intensity {lambda} cannot produce an exceedance rate of {r}")
        })?;
        Ok(1.0 - r / lambda)
    }

    /// Intensity implied by a severity with survival `P[X >= amount]`.
    pub fn implied_intensity(&self, survival_at_amount: f64) -> Result<f64> {
        ensure(survival_at_amount > 0.0 && survival_at_amount <= 1.0, || {
            format!("survival probability must lie in (0, 1], got {survival_at_amount}")
        })?;
        Ok(self.rate() / survival_at_amount)
    }
}

/// Either a supplied `xi` or the literal `"estimate"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum XiSetting {
    Value(f64),
    Keyword(XiKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiKeyword {
    Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpertsSection {
    pub opinions: Vec<f64>,
    pub xi: XiSetting,
}

impl ExpertsSection {
    pub fn to_opinions(&self) -> Result<ExpertIntensityOpinions> {
        match self.xi {
            XiSetting::Value(xi) => ExpertIntensityOpinions::new(self.opinions.clone(), xi),
            XiSetting::Keyword(XiKeyword::Estimate) => ExpertIntensityOpinions::with_estimated_xi(self.opinions.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirichletSection {
    pub concentration: f64,
    pub knots: Vec<f64>,
    pub values: Vec<f64>,
    pub interpolation: Interpolation,
}

impl DirichletSection {
    pub fn to_prior(&self) -> Result<DirichletPrior> {
        let base = StepDistribution::new(self.knots.clone(), self.values.clone(), self.interpolation)?;
        DirichletPrior::new(base, self.concentration)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DsSection {
    pub name: String,
    pub kind: String,
    pub elements: Vec<[f64; 3]>,
}

impl DsSection {
    pub fn to_structure(&self) -> Result<DempsterShaferStructure> {
        let kind: BoundKind = self.kind.parse()?;
        let elements = self.elements.iter().map(|&[lo, hi, p]| FocalElement::new(lo, hi, p)).collect();
        DempsterShaferStructure::with_kind(elements, kind)
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(toml_error(text))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config serializes")
    }

    /// Checks every section by building the objects it describes.
    pub fn validate(&self) -> Result<()> {
        if let Some(s) = &self.elicited_interval {
            s.to_interval()?;
        }
        self.exceedance.iter().try_for_each(ExceedanceStatement::validate)?;
        if let Some(s) = &self.experts {
            s.to_opinions()?;
        }
        if let Some(s) = &self.dirichlet {
            s.to_prior()?;
        }
        for s in &self.ds_structure {
            s.to_structure()?;
        }
        Ok(())
    }

    pub fn ds_structure(&self, name: &str) -> Result<DempsterShaferStructure> {
        self.ds_structure
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::InvalidParameter(format!("no ds_structure named '{name}'")))?
            .to_structure()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellsConfig {
    pub cell: Vec<CellSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSection {
    pub label: String,
    pub frequency: FrequencyModel,
    pub severity: SeverityModel,
}

impl CellsConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(toml_error(text))?;
        ensure(!cfg.cell.is_empty(), || "cells file defines no [[cell]]".into())?;
        cfg.cells()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("cells config serializes")
    }

    pub fn cells(&self) -> Result<Vec<RiskCellModel>> {
        self.cell
            .iter()
            .map(|c| RiskCellModel::new(c.label.clone(), c.frequency.clone(), c.severity.clone()))
            .collect()
    }
}

fn toml_error(text: &str) -> impl Fn(toml::de::Error) -> Error + '_ {
    move |e| {
        let line = e.span().map_or(0, |s| text[..s.start].lines().count().max(1));
        Error::Parse { line, message: e.message().to_string() }
    }
}
