use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

/// How a [`StepDistribution`] is evaluated between knots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    /// Right-continuous step: the value at the last knot `<= x`.
    Step,
    /// Linear between neighbouring finite knots.
    Linear,
}

impl Interpolation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Interpolation::Step => "step",
            Interpolation::Linear => "linear",
        }
    }
}

impl std::str::FromStr for Interpolation {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "step" => Ok(Interpolation::Step),
            "linear" => Ok(Interpolation::Linear),
            other => Err(crate::error::Error::InvalidParameter(format!(
                "unknown interpolation '{other}' (expected step or linear)"
            ))),
        }
    }
}

/// A nondecreasing function into [0, 1] given by its values at ascending
/// knots. The value is 0 left of the first knot and equals the last value
/// from the last knot onwards. Knots may be `-inf` or `+inf`, which is how
/// bounds with mass in an unbounded tail are represented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepDistribution {
    knots: Vec<f64>,
    values: Vec<f64>,
    interpolation: Interpolation,
}

impl StepDistribution {
    /// Builds a bound-type function: values nondecreasing in [0, 1], but not
    /// required to reach 1.
    pub fn new_bound(knots: Vec<f64>, values: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        ensure(!knots.is_empty(), || "step function needs at least one knot".into())?;
        ensure(knots.len() == values.len(), || {
            format!("{} knots but {} values", knots.len(), values.len())
        })?;
        ensure(knots.iter().all(|k| !k.is_nan()), || "knots must not be NaN".into())?;
        ensure(knots.windows(2).all(|w| w[0] < w[1]), || "knots must be strictly ascending".into())?;
        ensure(values.iter().all(|v| (0.0..=1.0).contains(v)), || "values must lie in [0, 1]".into())?;
        ensure(values.windows(2).all(|w| w[0] <= w[1]), || "values must be nondecreasing".into())?;
        Ok(Self { knots, values, interpolation })
    }

    /// Builds a distribution function; the last value must be 1.
    pub fn new(knots: Vec<f64>, values: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        let d = Self::new_bound(knots, values, interpolation)?;
        let last = *d.values.last().expect("nonempty");
        ensure((last - 1.0).abs() <= 1e-12, || format!("distribution must end at 1, ends at {last}"))?;
        Ok(d)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn eval(&self, x: f64) -> f64 {
        // index of the first knot > x
        let idx = self.knots.partition_point(|&k| k <= x);
        if idx == 0 {
            return 0.0;
        }
        let i = idx - 1;
        match self.interpolation {
            Interpolation::Step => self.values[i],
            Interpolation::Linear => {
                if i + 1 >= self.knots.len() {
                    return self.values[i];
                }
                let (x0, x1) = (self.knots[i], self.knots[i + 1]);
                if !(x0.is_finite() && x1.is_finite()) {
                    return self.values[i];
                }
                let t = (x - x0) / (x1 - x0);
                self.values[i] + t * (self.values[i + 1] - self.values[i])
            }
        }
    }

    /// Lower generalized inverse `inf { x : F(x) >= u }` for a step function,
    /// with a small slack on the comparison.
    pub fn inverse_at_least(&self, u: f64) -> f64 {
        const SLACK: f64 = 1e-12;
        self.knots
            .iter()
            .zip(&self.values)
            .find(|(_, &v)| v >= u - SLACK)
            .map(|(&k, _)| k)
            .unwrap_or(f64::INFINITY)
    }

    /// `inf { x : F(x) > u }` for a step function.
    pub fn inverse_above(&self, u: f64) -> f64 {
        const SLACK: f64 = 1e-12;
        self.knots
            .iter()
            .zip(&self.values)
            .find(|(_, &v)| v > u + SLACK)
            .map(|(&k, _)| k)
            .unwrap_or(f64::INFINITY)
    }
}
