use serde::{Deserialize, Serialize};

use super::model::SeverityModel;
use crate::error::{ensure, Error, Result};
use crate::numeric::order_independent_sum;

/// Origin of an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Internal,
    External,
    Expert,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::Internal => "internal",
            Source::External => "external",
            Source::Expert => "expert",
        }
    }
}

impl std::str::FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "internal" => Ok(Source::Internal),
            "external" => Ok(Source::External),
            "expert" => Ok(Source::Expert),
            _ => Err(Error::InvalidParameter(format!("unknown source '{s}'"))),
        }
    }
}

/// Unbiased estimate of a common quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub variance: f64,
    pub source: Source,
}

impl Estimate {
    pub fn new(value: f64, variance: f64, source: Source) -> Result<Self> {
        ensure(value.is_finite(), || format!("estimate must be finite, got {value}"))?;
        ensure(variance >= 0.0 && variance.is_finite(), || format!("variance must be >= 0, got {variance}"))?;
        Ok(Self { value, variance, source })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedEstimate {
    pub value: f64,
    pub variance: f64,
    pub weights: Vec<f64>,
    /// An input had zero variance and was returned as is.
    pub certain: bool,
}

/// Minimum-variance unbiased linear combination: weights proportional to
/// `1/sigma_i^2`, variance `(sum 1/sigma_k^2)^-1`.
///
/// An input with zero variance is returned exactly, flagged as certain.
pub fn min_variance_combine(estimates: &[Estimate]) -> Result<CombinedEstimate> {
    ensure(estimates.len() >= 2, || format!("need at least 2 estimates, got {}", estimates.len()))?;
    for e in estimates {
        Estimate::new(e.value, e.variance, e.source)?;
    }
    let exact: Vec<usize> = (0..estimates.len()).filter(|&i| estimates[i].variance == 0.0).collect();
    if let Some(&first) = exact.first() {
        let v = estimates[first].value;
        if let Some(&other) = exact.iter().find(|&&i| estimates[i].value != v) {
            return Err(Error::InvalidParameter(format!(
                "zero-variance estimates disagree: {v} and {}",
                estimates[other].value
            )));
        }
        let mut weights = vec![0.0; estimates.len()];
        weights[first] = 1.0;
        return Ok(CombinedEstimate { value: v, variance: 0.0, weights, certain: true });
    }

    if let [a, b] = estimates {
        let (s1, s2) = (a.variance, b.variance);
        let w1 = s2 / (s1 + s2);
        let w2 = s1 / (s1 + s2);
        return Ok(CombinedEstimate {
            value: w1 * a.value + w2 * b.value,
            variance: s1 * s2 / (s1 + s2),
            weights: vec![w1, w2],
            certain: false,
        });
    }

    let precisions: Vec<f64> = estimates.iter().map(|e| 1.0 / e.variance).collect();
    let total = order_independent_sum(&precisions);
    let weights: Vec<f64> = precisions.iter().map(|p| p / total).collect();
    let terms: Vec<f64> = weights.iter().zip(estimates).map(|(w, e)| w * e.value).collect();
    Ok(CombinedEstimate {
        value: order_independent_sum(&terms),
        variance: 1.0 / total,
        weights,
        certain: false,
    })
}

/// `w lambda_int + (1 - w) lambda_ext`.
pub fn adhoc_intensity_mix(lambda_int: f64, lambda_ext: f64, w: f64) -> Result<f64> {
    ensure(lambda_int > 0.0 && lambda_ext > 0.0, || "intensities must be > 0".into())?;
    ensure((0.0..=1.0).contains(&w), || format!("weight must lie in [0, 1], got {w}"))?;
    Ok(w * lambda_int + (1.0 - w) * lambda_ext)
}

/// `w1 F_SA + w2 F_I + (1 - w1 - w2) F_E`.
pub fn adhoc_severity_mixture(
    scenario: SeverityModel,
    internal: SeverityModel,
    external: SeverityModel,
    w1: f64,
    w2: f64,
) -> Result<SeverityModel> {
    ensure(w1 >= 0.0 && w2 >= 0.0 && w1 + w2 <= 1.0, || {
        format!("need w1, w2 >= 0 and w1 + w2 <= 1, got ({w1}, {w2})")
    })?;
    let m = SeverityModel::Mixture(vec![(w1, scenario), (w2, internal), (1.0 - w1 - w2, external)]);
    m.validate()?;
    Ok(m)
}

/// Basic indicator multiplier.
pub const BASIC_INDICATOR_ALPHA: f64 = 0.15;

/// Standardised approach factors for the eight business lines.
pub const STANDARDISED_BETAS: [f64; 8] = [0.18, 0.18, 0.12, 0.15, 0.18, 0.15, 0.12, 0.12];

/// `alpha / n * sum max(GI_j, 0)` with `n` the number of years with positive
/// gross income.
pub fn basic_indicator_capital(gross_income: &[f64], alpha: f64) -> Result<f64> {
    ensure(!gross_income.is_empty(), || "need gross income for at least one year".into())?;
    ensure(alpha >= 0.0, || format!("alpha must be >= 0, got {alpha}"))?;
    let positive: Vec<f64> = gross_income.iter().copied().filter(|&g| g > 0.0).collect();
    if positive.is_empty() {
        return Ok(0.0);
    }
    Ok(alpha * positive.iter().sum::<f64>() / positive.len() as f64)
}

/// `1/3 sum_j max(sum_i beta_i GI_i(j), 0)` over three years.
pub fn standardised_capital(gross_income: &[[f64; 3]; 8], betas: &[f64; 8]) -> f64 {
    (0..3)
        .map(|j| {
            let year: f64 = (0..8).map(|i| betas[i] * gross_income[i][j]).sum();
            year.max(0.0)
        })
        .sum::<f64>()
        / 3.0
}
