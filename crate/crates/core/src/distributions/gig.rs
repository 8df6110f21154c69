//! Generalised inverse Gaussian law with density
//!
//! ```text
//! pi(x) = (omega/phi)^((nu+1)/2) / (2 K_{nu+1}(2 sqrt(omega phi))) * x^nu * exp(-omega x - phi / x)
//! ```
//!
//! for `x > 0`. At `phi = 0` the law degenerates to `Gamma(nu + 1, 1/omega)`;
//! that case is only normalizable when `nu + 1 > 0` and is never entered
//! silently by the moment functions.

use serde::{Deserialize, Serialize};

use super::bessel::ln_bessel_k;
use super::{ContinuousDistribution, GammaParams};
use crate::error::{ensure, Error, Result};
use crate::numeric::{integrate, QuadTolerance};

/// Below this value of `2 sqrt(omega phi)` Bessel ratios are not formed and
/// the gamma limit is used instead.
pub const BESSEL_ARG_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GigParams {
    pub nu: f64,
    pub omega: f64,
    pub phi: f64,
}

impl GigParams {
    pub fn new(nu: f64, omega: f64, phi: f64) -> Result<Self> {
        ensure(nu.is_finite(), || format!("GIG nu must be finite, got {nu}"))?;
        ensure(omega > 0.0 && omega.is_finite(), || format!("GIG omega must be > 0, got {omega}"))?;
        ensure(phi >= 0.0 && phi.is_finite(), || format!("GIG phi must be >= 0, got {phi}"))?;
        ensure(phi > 0.0 || nu + 1.0 > 0.0, || {
            format!("GIG with phi = 0 needs nu + 1 > 0 to be normalizable, got nu = {nu}")
        })?;
        Ok(Self { nu, omega, phi })
    }

    /// Argument `2 sqrt(omega phi)` of the Bessel functions.
    pub fn bessel_arg(&self) -> f64 {
        2.0 * (self.omega * self.phi).sqrt()
    }

    /// The gamma law reached as `phi -> 0`.
    pub fn gamma_limit(&self) -> Result<GammaParams> {
        GammaParams::new(self.nu + 1.0, 1.0 / self.omega)
    }
}

/// How the moment functions treat `phi = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiZero {
    /// Return [`Error::DegenerateGig`].
    Reject,
    /// Use the gamma limit `Gamma(nu + 1, 1/omega)`.
    GammaLimit,
}

fn use_gamma_branch(p: &GigParams, phi_zero: PhiZero) -> Result<bool> {
    if p.phi == 0.0 {
        return match phi_zero {
            PhiZero::Reject => Err(Error::DegenerateGig),
            PhiZero::GammaLimit => Ok(true),
        };
    }
    Ok(p.bessel_arg() <= BESSEL_ARG_FLOOR && p.nu + 1.0 > 0.0)
}

/// Posterior mean `sqrt(phi/omega) K_{nu+2}(z) / K_{nu+1}(z)`, `z = 2 sqrt(omega phi)`.
pub fn gig_mean(p: &GigParams, phi_zero: PhiZero) -> Result<f64> {
    if use_gamma_branch(p, phi_zero)? {
        return Ok((p.nu + 1.0) / p.omega);
    }
    let z = p.bessel_arg();
    let ln_ratio = ln_bessel_k(p.nu + 2.0, z)? - ln_bessel_k(p.nu + 1.0, z)?;
    Ok((0.5 * (p.phi / p.omega).ln() + ln_ratio).exp())
}

/// Second raw moment, `(phi/omega) K_{nu+3}(z) / K_{nu+1}(z)`.
pub fn gig_second_moment(p: &GigParams, phi_zero: PhiZero) -> Result<f64> {
    if use_gamma_branch(p, phi_zero)? {
        let k = p.nu + 1.0;
        return Ok(k * (k + 1.0) / (p.omega * p.omega));
    }
    let z = p.bessel_arg();
    let ln_ratio = ln_bessel_k(p.nu + 3.0, z)? - ln_bessel_k(p.nu + 1.0, z)?;
    Ok(((p.phi / p.omega).ln() + ln_ratio).exp())
}

/// Mode `(nu + sqrt(nu^2 + 4 omega phi)) / (2 omega)`.
pub fn gig_mode(p: &GigParams) -> f64 {
    (p.nu + (p.nu * p.nu + 4.0 * p.omega * p.phi).sqrt()) / (2.0 * p.omega)
}

/// GIG law with its normalizing constant evaluated once.
#[derive(Debug, Clone)]
pub struct Gig {
    params: GigParams,
    /// `None` when `phi = 0` (delegates to the gamma limit).
    ln_norm: Option<f64>,
    gamma: Option<GammaParams>,
    mode: f64,
    mean: f64,
}

const CDF_TOL: QuadTolerance = QuadTolerance::new(1e-15, 1e-12);

impl Gig {
    pub fn new(params: GigParams) -> Result<Self> {
        let params = GigParams::new(params.nu, params.omega, params.phi)?;
        let mode = gig_mode(&params);
        if params.phi == 0.0 {
            let gamma = params.gamma_limit()?;
            return Ok(Self { params, ln_norm: None, gamma: Some(gamma), mode, mean: gamma.shape * gamma.scale });
        }
        let z = params.bessel_arg();
        let ln_norm = 0.5 * (params.nu + 1.0) * (params.omega / params.phi).ln()
            - std::f64::consts::LN_2
            - ln_bessel_k(params.nu + 1.0, z)?;
        let mean = gig_mean(&params, PhiZero::Reject)?;
        Ok(Self { params, ln_norm: Some(ln_norm), gamma: None, mode, mean })
    }

    pub fn params(&self) -> &GigParams {
        &self.params
    }

    pub fn mode(&self) -> f64 {
        self.mode
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if let Some(g) = &self.gamma {
            return g.ln_pdf(x);
        }
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let p = &self.params;
        self.ln_norm.unwrap_or(0.0) + p.nu * x.ln() - p.omega * x - p.phi / x
    }

    /// Point beyond the mode where the log density has fallen 60 below its peak.
    fn upper_cut(&self) -> f64 {
        let peak = self.ln_pdf(self.mode.max(f64::MIN_POSITIVE));
        let mut step = self.mode.max(1.0 / self.params.omega);
        let mut x = self.mode + step;
        while self.ln_pdf(x) - peak > -60.0 {
            step *= 2.0;
            x = self.mode + step;
        }
        x
    }
}

impl ContinuousDistribution for Gig {
    fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    fn cdf(&self, x: f64) -> f64 {
        if let Some(g) = &self.gamma {
            return g.cdf(x);
        }
        if x <= 0.0 {
            return 0.0;
        }
        if x.is_infinite() {
            return 1.0;
        }
        let f = |t: f64| self.pdf(t);
        if x <= self.mode {
            integrate(f, 0.0, x, CDF_TOL).unwrap_or(f64::NAN).clamp(0.0, 1.0)
        } else {
            let cut = self.upper_cut();
            if x >= cut {
                return 1.0;
            }
            (1.0 - integrate(f, x, cut, CDF_TOL).unwrap_or(f64::NAN)).clamp(0.0, 1.0)
        }
    }

    fn mean(&self) -> f64 {
        self.mean
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn quantile_start(&self, _p: f64) -> f64 {
        self.mode.max(self.mean * 1e-3)
    }
}
