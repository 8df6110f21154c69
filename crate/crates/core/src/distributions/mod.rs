//! Distribution families shared by the combining methods and the capital
//! engine.
//!
//! Parameter records validate their invariants on construction. Continuous
//! quantiles are obtained by bracketed root finding on the cdf (bisection,
//! then a Newton polish), so every family, including the GIG which has no
//! closed-form inverse, goes through the same code path.

mod bessel;
mod gig;
mod step;

pub use bessel::{bessel_k, ln_bessel_k};
pub use gig::{gig_mean, gig_mode, gig_second_moment, Gig, GigParams, PhiZero};
pub use step::{Interpolation, StepDistribution};

use serde::{Deserialize, Serialize};
use statrs::function::beta::{beta_reg, ln_beta};
use statrs::function::erf::erfc;
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use crate::error::{ensure, Error, Result};
use crate::numeric::{integrate, invert_cdf, QuadTolerance};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// A univariate continuous law.
pub trait ContinuousDistribution {
    fn pdf(&self, x: f64) -> f64;
    fn cdf(&self, x: f64) -> f64;
    fn mean(&self) -> f64;
    /// Closure of the support, possibly infinite.
    fn support(&self) -> (f64, f64);

    /// Where the quantile search starts.
    fn quantile_start(&self, _p: f64) -> f64 {
        self.mean()
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        invert_cdf(
            |x| self.cdf(x),
            |x| self.pdf(x),
            p,
            self.support(),
            self.quantile_start(p),
        )
    }
}

/// A law on the nonnegative integers.
pub trait DiscreteDistribution {
    fn pmf(&self, k: u64) -> f64;
    fn cdf(&self, k: u64) -> f64;
    fn mean(&self) -> f64;

    /// Smallest `k` with `cdf(k) >= p`.
    fn quantile(&self, p: f64) -> Result<u64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!(
                "probability must lie in (0, 1), got {p}"
            )));
        }
        if self.cdf(0) >= p {
            return Ok(0);
        }
        let mut hi: u64 = 1;
        while self.cdf(hi) < p {
            hi = hi
                .checked_mul(2)
                .ok_or_else(|| Error::Numerical("discrete quantile overflow".into()))?;
        }
        let mut lo = hi / 2; // cdf(lo) < p
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.cdf(mid) >= p {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

fn positive_finite(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

/// Gamma law with shape `alpha` and scale `beta` (mean `alpha * beta`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaParams {
    pub shape: f64,
    pub scale: f64,
}

impl GammaParams {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        ensure(positive_finite(shape), || format!("gamma shape must be > 0, got {shape}"))?;
        ensure(positive_finite(scale), || format!("gamma scale must be > 0, got {scale}"))?;
        Ok(Self { shape, scale })
    }

    pub fn variance(&self) -> f64 {
        self.shape * self.scale * self.scale
    }

    pub fn stdev(&self) -> f64 {
        self.scale * self.shape.sqrt()
    }

    /// Coefficient of variation, `1 / sqrt(shape)`.
    pub fn vco(&self) -> f64 {
        1.0 / self.shape.sqrt()
    }

    pub fn mode(&self) -> f64 {
        ((self.shape - 1.0) * self.scale).max(0.0)
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return f64::NEG_INFINITY;
        }
        if x == 0.0 {
            return match self.shape.partial_cmp(&1.0) {
                Some(std::cmp::Ordering::Less) => f64::INFINITY,
                Some(std::cmp::Ordering::Equal) => -self.scale.ln(),
                _ => f64::NEG_INFINITY,
            };
        }
        (self.shape - 1.0) * x.ln() - x / self.scale - ln_gamma(self.shape) - self.shape * self.scale.ln()
    }
}

impl ContinuousDistribution for GammaParams {
    fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x.is_infinite() {
            1.0
        } else {
            gamma_lr(self.shape, x / self.scale)
        }
    }

    fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

/// Normal law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalParams {
    pub mean: f64,
    pub stdev: f64,
}

impl NormalParams {
    pub fn new(mean: f64, stdev: f64) -> Result<Self> {
        ensure(mean.is_finite(), || format!("normal mean must be finite, got {mean}"))?;
        ensure(positive_finite(stdev), || format!("normal stdev must be > 0, got {stdev}"))?;
        Ok(Self { mean, stdev })
    }

    pub fn standard() -> Self {
        Self { mean: 0.0, stdev: 1.0 }
    }

    pub fn variance(&self) -> f64 {
        self.stdev * self.stdev
    }
}

impl ContinuousDistribution for NormalParams {
    fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.stdev;
        (-0.5 * z * z).exp() / (self.stdev * SQRT_2PI)
    }

    fn cdf(&self, x: f64) -> f64 {
        0.5 * erfc(-(x - self.mean) / (self.stdev * std::f64::consts::SQRT_2))
    }

    fn mean(&self) -> f64 {
        self.mean
    }

    fn support(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Lognormal law: `ln X ~ N(mu, sigma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LognormalParams {
    pub mu: f64,
    pub sigma: f64,
}

impl LognormalParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        ensure(mu.is_finite(), || format!("lognormal mu must be finite, got {mu}"))?;
        ensure(positive_finite(sigma), || format!("lognormal sigma must be > 0, got {sigma}"))?;
        Ok(Self { mu, sigma })
    }

    fn log_normal(&self) -> NormalParams {
        NormalParams { mean: self.mu, stdev: self.sigma }
    }

    pub fn variance(&self) -> f64 {
        let s2 = self.sigma * self.sigma;
        (s2.exp() - 1.0) * (2.0 * self.mu + s2).exp()
    }
}

impl ContinuousDistribution for LognormalParams {
    fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.log_normal().pdf(x.ln()) / x
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            self.log_normal().cdf(x.ln())
        }
    }

    fn mean(&self) -> f64 {
        (self.mu + 0.5 * self.sigma * self.sigma).exp()
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn quantile_start(&self, _p: f64) -> f64 {
        self.mu.exp()
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        // Root-find on the log scale, where the law is normal; avoids a
        // badly scaled bracket for large sigma.
        Ok(self.log_normal().quantile(p)?.exp())
    }
}

/// Beta law on (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaParams {
    pub a: f64,
    pub b: f64,
}

impl BetaParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        ensure(positive_finite(a), || format!("beta a must be > 0, got {a}"))?;
        ensure(positive_finite(b), || format!("beta b must be > 0, got {b}"))?;
        Ok(Self { a, b })
    }

    pub fn variance(&self) -> f64 {
        let s = self.a + self.b;
        self.a * self.b / (s * s * (s + 1.0))
    }
}

impl ContinuousDistribution for BetaParams {
    fn pdf(&self, x: f64) -> f64 {
        if !(x > 0.0 && x < 1.0) {
            return 0.0;
        }
        if ConcentratedBeta::applies(self.a, self.b) {
            return ConcentratedBeta::new(self.a, self.b).pdf(x);
        }
        ((self.a - 1.0) * x.ln() + (self.b - 1.0) * (-x).ln_1p() - ln_beta(self.a, self.b)).exp()
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x >= 1.0 {
            1.0
        } else if ConcentratedBeta::applies(self.a, self.b) {
            ConcentratedBeta::new(self.a, self.b).cdf(x)
        } else {
            beta_reg(self.a, self.b, x)
        }
    }

    fn mean(&self) -> f64 {
        self.a / (self.a + self.b)
    }

    fn support(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!("probability must lie in (0, 1), got {p}")));
        }
        // Bisection stays inside (0, 1); the generic bracket expansion may step out.
        let mut lo = 0.0_f64;
        let mut hi = 1.0_f64;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-14 {
                break;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..20 {
            let d = self.pdf(x);
            if !(d > 0.0 && d.is_finite()) {
                break;
            }
            let next = x - (self.cdf(x) - p) / d;
            if !(next > 0.0 && next < 1.0) || (next - x).abs() > 1e-10 {
                break;
            }
            x = next;
        }
        Ok(x)
    }
}

/// Above this `a + b` the continued fraction behind `beta_reg` loses
/// accuracy (it returns values outside [0, 1] by `a = b = 1e8`).
const LARGE_BETA: f64 = 1e4;

/// Beta law with large `a, b >= 2`, handled relative to its mode. The
/// density kernel is integrated in the offset from the mode and normalized
/// numerically, which avoids both the continued fraction and `ln_beta`
/// (whose terms cancel badly at these sizes).
struct ConcentratedBeta {
    a: f64,
    b: f64,
    mode: f64,
    t_lo: f64,
    t_hi: f64,
    total: f64,
}

impl ConcentratedBeta {
    /// Both parameters large and the 40 sd window strictly inside (0, 1).
    fn applies(a: f64, b: f64) -> bool {
        if a.min(b) < 2.0 || a + b <= LARGE_BETA {
            return false;
        }
        let (mode, sd) = Self::mode_sd(a, b);
        mode - 40.0 * sd > 0.0 && mode + 40.0 * sd < 1.0
    }

    fn mode_sd(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        ((a - 1.0) / (s - 2.0), (a * b / (s * s * (s + 1.0))).sqrt())
    }

    fn new(a: f64, b: f64) -> Self {
        let (mode, sd) = Self::mode_sd(a, b);
        let (t_lo, t_hi) = (-40.0 * sd, 40.0 * sd);
        let mut d = Self { a, b, mode, t_lo, t_hi, total: 1.0 };
        d.total = d.quad(t_lo, 0.0) + d.quad(0.0, t_hi);
        d
    }

    /// Density at `mode + t` up to the normalizing constant; the linear
    /// parts of the two logs cancel exactly.
    fn kernel(&self, t: f64) -> f64 {
        ((self.a - 1.0) * ln1p_minus_x(t / self.mode) + (self.b - 1.0) * ln1p_minus_x(-t / (1.0 - self.mode))).exp()
    }

    fn quad(&self, u: f64, v: f64) -> f64 {
        integrate(|t| self.kernel(t), u, v, QuadTolerance::new(0.0, 1e-13)).unwrap_or(f64::NAN)
    }

    fn pdf(&self, x: f64) -> f64 {
        let t = x - self.mode;
        if t <= self.t_lo || t >= self.t_hi {
            return 0.0;
        }
        self.kernel(t) / self.total
    }

    fn cdf(&self, x: f64) -> f64 {
        let t = x - self.mode;
        if t <= self.t_lo {
            0.0
        } else if t >= self.t_hi {
            1.0
        } else if t < 0.0 {
            self.quad(self.t_lo, t) / self.total
        } else {
            1.0 - self.quad(t, self.t_hi) / self.total
        }
    }
}

/// `ln(1 + u) - u` without cancellation for small `u`.
fn ln1p_minus_x(u: f64) -> f64 {
    if u.abs() >= 0.1 {
        return u.ln_1p() - u;
    }
    // -u^2/2 + u^3/3 - ...
    let mut term = u;
    let mut acc = 0.0;
    for k in 2..=18 {
        term *= -u;
        acc += term / k as f64;
    }
    acc
}

/// Poisson law with intensity `lambda >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonParams {
    pub lambda: f64,
}

impl PoissonParams {
    pub fn new(lambda: f64) -> Result<Self> {
        ensure(lambda >= 0.0 && lambda.is_finite(), || {
            format!("poisson intensity must be >= 0, got {lambda}")
        })?;
        Ok(Self { lambda })
    }
}

impl DiscreteDistribution for PoissonParams {
    fn pmf(&self, k: u64) -> f64 {
        if self.lambda == 0.0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        let k = k as f64;
        (k * self.lambda.ln() - self.lambda - ln_gamma(k + 1.0)).exp()
    }

    fn cdf(&self, k: u64) -> f64 {
        if self.lambda == 0.0 {
            return 1.0;
        }
        gamma_ur(k as f64 + 1.0, self.lambda)
    }

    fn mean(&self) -> f64 {
        self.lambda
    }
}

/// Negative binomial law
/// `P[N = m] = Gamma(size + m) / (Gamma(size) m!) prob^size (1 - prob)^m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegBinParams {
    pub size: f64,
    pub prob: f64,
}

impl NegBinParams {
    pub fn new(size: f64, prob: f64) -> Result<Self> {
        ensure(positive_finite(size), || format!("negative binomial size must be > 0, got {size}"))?;
        ensure(prob > 0.0 && prob < 1.0, || {
            format!("negative binomial prob must lie in (0, 1), got {prob}")
        })?;
        Ok(Self { size, prob })
    }

    pub fn variance(&self) -> f64 {
        self.size * (1.0 - self.prob) / (self.prob * self.prob)
    }
}

impl DiscreteDistribution for NegBinParams {
    fn pmf(&self, m: u64) -> f64 {
        let m = m as f64;
        (ln_gamma(self.size + m) - ln_gamma(self.size) - ln_gamma(m + 1.0)
            + self.size * self.prob.ln()
            + m * (-self.prob).ln_1p())
        .exp()
    }

    fn cdf(&self, m: u64) -> f64 {
        beta_reg(self.size, m as f64 + 1.0, self.prob)
    }

    fn mean(&self) -> f64 {
        self.size * (1.0 - self.prob) / self.prob
    }
}
