//! Combining internal data, external data (through the prior) and expert
//! opinions in a single model.
//!
//! Frequency: `Lambda ~ Gamma(alpha0, beta0)`, yearly counts
//! `N_t | Lambda ~ Poisson(V Lambda)` and expert estimates
//! `Delta_m | Lambda ~ Gamma(xi, Lambda / xi)`. The posterior of `Lambda` is
//! GIG with `nu = alpha0 - 1 - M xi + sum n`, `omega = V T + 1/beta0`,
//! `phi = xi sum delta`.
//!
//! Severity: `mu ~ N(mu0, sigma0)`, log-losses `N(mu, sigma)` and expert
//! estimates `N(mu, xi)`, giving a normal posterior with three credibility
//! weights.

use serde::{Deserialize, Serialize};

use crate::conjugate::{lognormal_normal_posterior, AnnualCounts, LogLossSample};
use crate::distributions::{GammaParams, GigParams, NormalParams};
use crate::error::{ensure, Error, Result};
use crate::numeric::order_independent_sum;

/// Whether the expert precision was supplied or estimated from the opinions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiSource {
    Supplied,
    Estimated,
}

impl XiSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            XiSource::Supplied => "supplied",
            XiSource::Estimated => "estimated",
        }
    }
}

/// Expert estimates of the intensity with a common precision `xi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpertIntensityOpinions {
    pub opinions: Vec<f64>,
    pub xi: f64,
    pub xi_source: XiSource,
}

impl ExpertIntensityOpinions {
    pub fn new(opinions: Vec<f64>, xi: f64) -> Result<Self> {
        ensure(!opinions.is_empty(), || "need at least one expert opinion".into())?;
        ensure(opinions.iter().all(|&d| d > 0.0 && d.is_finite()), || {
            "expert intensity opinions must be positive".into()
        })?;
        ensure(xi > 0.0 && xi.is_finite(), || format!("xi must be > 0, got {xi}"))?;
        Ok(Self { opinions, xi, xi_source: XiSource::Supplied })
    }

    /// Estimates `xi` from the spread of the opinions themselves.
    pub fn with_estimated_xi(opinions: Vec<f64>) -> Result<Self> {
        let xi = estimate_xi(&opinions)?;
        let mut e = Self::new(opinions, xi)?;
        e.xi_source = XiSource::Estimated;
        Ok(e)
    }

    pub fn count(&self) -> usize {
        self.opinions.len()
    }

    /// Coefficient of variation of an opinion given the intensity, `1/sqrt(xi)`.
    pub fn vco(&self) -> f64 {
        1.0 / self.xi.sqrt()
    }
}

/// `xi = (mean / sd)^2` with the unbiased sample variance.
pub fn estimate_xi(opinions: &[f64]) -> Result<f64> {
    let m = opinions.len();
    if m < 2 {
        return Err(Error::InsufficientExperts { required: 2, got: m });
    }
    let mean = order_independent_sum(opinions) / m as f64;
    let dev: Vec<f64> = opinions.iter().map(|d| (d - mean).powi(2)).collect();
    let var = order_independent_sum(&dev) / (m as f64 - 1.0);
    if var == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(mean * mean / var)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyEvidence {
    pub prior: GammaParams,
    pub counts: AnnualCounts,
    /// Exposure scale `V` applied to the intensity each year.
    pub scale: f64,
    pub experts: Option<ExpertIntensityOpinions>,
}

impl FrequencyEvidence {
    pub fn new(
        prior: GammaParams,
        counts: AnnualCounts,
        scale: f64,
        experts: Option<ExpertIntensityOpinions>,
    ) -> Result<Self> {
        ensure(scale > 0.0 && scale.is_finite(), || format!("scale V must be > 0, got {scale}"))?;
        Ok(Self { prior, counts, scale, experts })
    }
}

/// GIG parameters before any year of internal data.
pub fn gig_initial(prior: GammaParams, experts: Option<&ExpertIntensityOpinions>) -> Result<GigParams> {
    let (m_xi, phi) = match experts {
        Some(e) => (e.count() as f64 * e.xi, e.xi * order_independent_sum(&e.opinions)),
        None => (0.0, 0.0),
    };
    GigParams::new(prior.shape - 1.0 - m_xi, 1.0 / prior.scale, phi)
}

/// One more year with `n_next` events: `nu += n`, `omega += V`; `phi` is unchanged.
pub fn gig_update_step(p: GigParams, n_next: u64, scale: f64) -> GigParams {
    GigParams {
        nu: p.nu + n_next as f64,
        omega: p.omega + scale,
        phi: p.phi,
    }
}

/// Posterior of the intensity given all three sources.
pub fn gig_posterior(ev: &FrequencyEvidence) -> Result<GigParams> {
    let start = gig_initial(ev.prior, ev.experts.as_ref())?;
    Ok(ev.counts.counts.iter().fold(start, |p, &n| gig_update_step(p, n, ev.scale)))
}

/// Posterior after each year `k = 1..T`.
pub fn gig_trajectory(ev: &FrequencyEvidence) -> Result<Vec<GigParams>> {
    let mut p = gig_initial(ev.prior, ev.experts.as_ref())?;
    Ok(ev
        .counts
        .counts
        .iter()
        .map(|&n| {
            p = gig_update_step(p, n, ev.scale);
            p
        })
        .collect())
}

/// Severity evidence. `expert_xi` is the standard deviation of an expert's
/// estimate of `mu` around the true value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeverityEvidence {
    pub prior: NormalParams,
    pub log_losses: LogLossSample,
    pub expert_mus: Vec<f64>,
    pub expert_xi: f64,
}

impl SeverityEvidence {
    pub fn new(prior: NormalParams, log_losses: LogLossSample, expert_mus: Vec<f64>, expert_xi: f64) -> Result<Self> {
        ensure(expert_xi > 0.0 && expert_xi.is_finite(), || {
            format!("expert xi must be > 0, got {expert_xi}")
        })?;
        ensure(expert_mus.iter().all(|m| m.is_finite()), || "expert estimates must be finite".into())?;
        Ok(Self { prior, log_losses, expert_mus, expert_xi })
    }
}

/// Posterior of the log-location and the weights of prior, internal data
/// and experts in its mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LnnPosterior {
    pub posterior: NormalParams,
    pub weights: [f64; 3],
}

/// `sigma^2 = (1/sigma0^2 + K/sigma^2 + M/xi^2)^-1`,
/// `mu = w1 mu0 + w2 mean(ln x) + w3 mean(delta)`.
pub fn lnn_posterior(ev: &SeverityEvidence) -> LnnPosterior {
    let k = ev.log_losses.values.len() as f64;
    let m = ev.expert_mus.len() as f64;
    let s2 = ev.log_losses.known_sigma.powi(2);
    let x2 = ev.expert_xi.powi(2);
    let p0 = 1.0 / ev.prior.variance();
    let precision = p0 + k / s2 + m / x2;
    let var = 1.0 / precision;
    let weights = [p0 / precision, k / s2 / precision, m / x2 / precision];

    if m == 0.0 {
        // Exactly the two-source model.
        return LnnPosterior { posterior: lognormal_normal_posterior(ev.prior, &ev.log_losses), weights };
    }
    let sum_y = if k > 0.0 { order_independent_sum(&ev.log_losses.values) } else { 0.0 };
    let sum_d = order_independent_sum(&ev.expert_mus);
    let mean = var * (ev.prior.mean * p0 + sum_y / s2 + sum_d / x2);
    LnnPosterior {
        posterior: NormalParams { mean, stdev: var.sqrt() },
        weights,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{gig_mean, PhiZero};

    fn worked_evidence(counts: Vec<u64>) -> FrequencyEvidence {
        FrequencyEvidence::new(
            GammaParams::new(3.407, 0.147).unwrap(),
            AnnualCounts::new(counts),
            1.0,
            Some(ExpertIntensityOpinions::new(vec![0.7], 4.0).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn initial_parameters_by_substitution() {
        let p = gig_posterior(&worked_evidence(vec![])).unwrap();
        assert!((p.nu - (3.407 - 1.0 - 4.0)).abs() < 1e-12);
        assert!((p.omega - 1.0 / 0.147).abs() < 1e-12);
        assert!((p.omega - 6.803).abs() < 1e-3);
        assert!((p.phi - 2.8).abs() < 1e-12);
    }

    #[test]
    fn no_experts_reduces_to_gamma_posterior() {
        let prior = GammaParams::new(3.407, 0.147).unwrap();
        let counts = AnnualCounts::new(vec![0, 1, 2, 0]);
        let ev = FrequencyEvidence::new(prior, counts.clone(), 1.0, None).unwrap();
        let p = gig_posterior(&ev).unwrap();
        assert_eq!(p.phi, 0.0);
        let g = crate::conjugate::poisson_gamma_posterior(prior, &counts);
        let mean = gig_mean(&p, PhiZero::GammaLimit).unwrap();
        assert!((mean / (g.shape * g.scale) - 1.0).abs() < 1e-12);
        assert!(gig_mean(&p, PhiZero::Reject).is_err());
    }

    #[test]
    fn zero_steps_is_identity() {
        let ev = worked_evidence(vec![]);
        assert_eq!(gig_posterior(&ev).unwrap(), gig_initial(ev.prior, ev.experts.as_ref()).unwrap());
        assert!(gig_trajectory(&ev).unwrap().is_empty());
    }

    #[test]
    fn xi_estimate_by_hand() {
        assert!((estimate_xi(&[1.0, 1.0, 3.0]).unwrap() - 25.0 / 12.0).abs() < 1e-14);
        assert_eq!(estimate_xi(&[0.4, 0.4]), Err(Error::ZeroVariance));
        assert!(matches!(estimate_xi(&[0.4]), Err(Error::InsufficientExperts { .. })));
        let e = ExpertIntensityOpinions::with_estimated_xi(vec![1.0, 1.0, 3.0]).unwrap();
        assert_eq!(e.xi_source, XiSource::Estimated);
        assert!((e.vco() - (12.0f64 / 25.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn lnn_by_hand() {
        let ev = SeverityEvidence::new(
            NormalParams::new(0.0, 1.0).unwrap(),
            LogLossSample::new(vec![2.0], 1.0).unwrap(),
            vec![1.0],
            1.0,
        )
        .unwrap();
        let r = lnn_posterior(&ev);
        assert!((r.posterior.variance() - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.posterior.mean - 1.0).abs() < 1e-15);
        assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lnn_without_evidence_returns_prior() {
        let prior = NormalParams::new(0.3, 1.2).unwrap();
        let ev = SeverityEvidence::new(prior, LogLossSample::new(vec![], 1.0).unwrap(), vec![], 0.5).unwrap();
        let r = lnn_posterior(&ev);
        assert_eq!(r.posterior, prior);
        assert_eq!(r.weights, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn lnn_without_experts_matches_two_source() {
        let prior = NormalParams::new(1.0, 0.8).unwrap();
        let data = LogLossSample::new(vec![1.5, 2.5, 0.2], 1.3).unwrap();
        let ev = SeverityEvidence::new(prior, data.clone(), vec![], 0.5).unwrap();
        assert_eq!(lnn_posterior(&ev).posterior, lognormal_normal_posterior(prior, &data));
    }
}
