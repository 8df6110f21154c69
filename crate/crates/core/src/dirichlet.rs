//! Dirichlet-process combining of a scenario distribution with observed
//! losses.
//!
//! The prior on the unknown severity cdf `F` has base `H` (from scenario
//! analysis) and concentration `alpha`. At any `x`, `F(x)` is
//! `Beta(alpha H(x), alpha (1 - H(x)))`. After observing `n` losses the
//! process is again Dirichlet with concentration `alpha + n` and base
//! `(alpha H(x) + sum 1{x_i <= x}) / (alpha + n)`.
//!
//! A small `alpha` trusts the data; scenario analysts usually settle on
//! values below ten.

use serde::{Deserialize, Serialize};

use crate::distributions::{BetaParams, ContinuousDistribution, Interpolation, StepDistribution};
use crate::error::{ensure, Result};

/// Dirichlet process on severity distributions. Holds the scenario base and
/// its weight separately from the observations so repeated updates stay
/// exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletPrior {
    scenario: StepDistribution,
    scenario_weight: f64,
    observations: Vec<f64>,
}

impl DirichletPrior {
    pub fn new(base: StepDistribution, concentration: f64) -> Result<Self> {
        ensure(concentration > 0.0 && concentration.is_finite(), || {
            format!("concentration must be > 0, got {concentration}")
        })?;
        Ok(Self { scenario: base, scenario_weight: concentration, observations: Vec::new() })
    }

    /// `alpha + n`.
    pub fn concentration(&self) -> f64 {
        self.scenario_weight + self.observations.len() as f64
    }

    pub fn scenario(&self) -> &StepDistribution {
        &self.scenario
    }

    /// Concentration of the original scenario prior.
    pub fn scenario_weight(&self) -> f64 {
        self.scenario_weight
    }

    /// Observations absorbed so far, sorted.
    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    pub fn interpolation(&self) -> Interpolation {
        self.scenario.interpolation()
    }

    /// Base distribution at `x`.
    pub fn base_cdf(&self, x: f64) -> f64 {
        let below = self.observations.partition_point(|&o| o <= x) as f64;
        (self.scenario_weight * self.scenario.eval(x) + below) / self.concentration()
    }

    /// Marginal law of `F(x)`, or `None` when it is a point mass.
    pub fn marginal(&self, x: f64) -> Option<BetaParams> {
        let h = self.base_cdf(x);
        let c = self.concentration();
        (h > 0.0 && h < 1.0).then_some(BetaParams { a: c * h, b: c * (1.0 - h) })
    }
}

/// Posterior after observing `samples`.
pub fn dp_posterior(prior: &DirichletPrior, samples: &[f64]) -> Result<DirichletPrior> {
    ensure(samples.iter().all(|s| !s.is_nan()), || "samples must not be NaN".into())?;
    let mut observations = prior.observations.clone();
    observations.extend_from_slice(samples);
    observations.sort_by(f64::total_cmp);
    Ok(DirichletPrior { observations, ..prior.clone() })
}

/// Quantiles of the marginal `Beta(alpha H(x), alpha (1 - H(x)))` at
/// `lower_q` and `upper_q`; a point band where `H(x)` is 0 or 1.
pub fn dp_marginal_band(prior: &DirichletPrior, x: f64, lower_q: f64, upper_q: f64) -> Result<(f64, f64)> {
    ensure(0.0 < lower_q && lower_q < upper_q && upper_q < 1.0, || {
        format!("need 0 < lower_q < upper_q < 1, got ({lower_q}, {upper_q})")
    })?;
    match prior.marginal(x) {
        None => {
            let h = prior.base_cdf(x);
            Ok((h, h))
        }
        Some(beta) => Ok((beta.quantile(lower_q)?, beta.quantile(upper_q)?)),
    }
}

/// One row of an emitted band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandRow {
    pub x: f64,
    pub lower: f64,
    pub mean: f64,
    pub upper: f64,
}

/// Band of `F(x)` over a caller-supplied grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandCurve {
    pub rows: Vec<BandRow>,
    pub lower_q: f64,
    pub upper_q: f64,
    pub concentration: f64,
    pub interpolation: Interpolation,
}

pub fn dp_band_curve(prior: &DirichletPrior, grid: &[f64], lower_q: f64, upper_q: f64) -> Result<BandCurve> {
    let rows = grid
        .iter()
        .map(|&x| {
            let (lower, upper) = dp_marginal_band(prior, x, lower_q, upper_q)?;
            Ok(BandRow { x, lower, mean: prior.base_cdf(x), upper })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BandCurve {
        rows,
        lower_q,
        upper_q,
        concentration: prior.concentration(),
        interpolation: prior.interpolation(),
    })
}
