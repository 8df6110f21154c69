//! Two-source Bayesian combining: a prior (from expert opinion or external
//! data) updated with internal data.
//!
//! Frequencies use the Poisson-gamma conjugate pair, severities the
//! lognormal-normal pair with known `sigma`. Both have one-step recursions;
//! the batch posteriors for Poisson-gamma are defined as the fold of those
//! steps, so iterating year by year reproduces the batch result bit for bit.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{digamma, ln_gamma};

use crate::distributions::{
    ContinuousDistribution, GammaParams, NegBinParams, NormalParams,
};
use crate::error::{ensure, Error, Result};
use crate::numeric::bisect;

/// Annual event counts `n_1..n_T`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AnnualCounts {
    pub counts: Vec<u64>,
}

impl AnnualCounts {
    pub fn new(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    pub fn years(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Maximum likelihood intensity, `None` without data.
    pub fn mle(&self) -> Option<f64> {
        (!self.counts.is_empty()).then(|| self.total() as f64 / self.years() as f64)
    }
}

impl From<Vec<u64>> for AnnualCounts {
    fn from(counts: Vec<u64>) -> Self {
        Self { counts }
    }
}

/// Log-losses `y_i = ln x_i` with known log-scale standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogLossSample {
    pub values: Vec<f64>,
    pub known_sigma: f64,
}

impl LogLossSample {
    pub fn new(values: Vec<f64>, known_sigma: f64) -> Result<Self> {
        ensure(known_sigma > 0.0 && known_sigma.is_finite(), || {
            format!("known sigma must be > 0, got {known_sigma}")
        })?;
        ensure(values.iter().all(|v| v.is_finite()), || "log-losses must be finite".into())?;
        Ok(Self { values, known_sigma })
    }

    /// Takes logs of positive loss amounts.
    pub fn from_losses(losses: &[f64], known_sigma: f64) -> Result<Self> {
        ensure(losses.iter().all(|&x| x > 0.0), || "losses must be positive".into())?;
        Self::new(losses.iter().map(|x| x.ln()).collect(), known_sigma)
    }
}

/// Expert statement `E[Lambda] = mean_estimate` and `P[lower <= Lambda <= upper] = coverage`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElicitedInterval {
    pub mean_estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub coverage: f64,
}

impl ElicitedInterval {
    pub fn new(mean_estimate: f64, lower: f64, upper: f64, coverage: f64) -> Result<Self> {
        ensure(mean_estimate > 0.0, || format!("mean estimate must be > 0, got {mean_estimate}"))?;
        ensure(lower > 0.0 && lower < upper, || {
            format!("need 0 < lower < upper, got [{lower}, {upper}]")
        })?;
        ensure(coverage > 0.0 && coverage < 1.0, || {
            format!("coverage must lie in (0, 1), got {coverage}")
        })?;
        Ok(Self { mean_estimate, lower, upper, coverage })
    }
}

// ---------------------------------------------------------------------------
// Poisson-gamma
// ---------------------------------------------------------------------------

/// One year of data: `alpha_k = alpha_{k-1} + n_k`, `beta_k = beta_{k-1} / (1 + beta_{k-1})`.
pub fn poisson_gamma_update_step(posterior: GammaParams, n_k: u64) -> GammaParams {
    GammaParams {
        shape: posterior.shape + n_k as f64,
        scale: posterior.scale / (1.0 + posterior.scale),
    }
}

/// Posterior `Gamma(alpha + sum n_i, beta / (1 + beta T))`. With no data the
/// prior is returned unchanged.
pub fn poisson_gamma_posterior(prior: GammaParams, data: &AnnualCounts) -> GammaParams {
    data.counts.iter().fold(prior, |p, &n| poisson_gamma_update_step(p, n))
}

/// The posterior after each year, `k = 1..T`.
pub fn poisson_gamma_trajectory(prior: GammaParams, data: &AnnualCounts) -> Vec<GammaParams> {
    data.counts
        .iter()
        .scan(prior, |p, &n| {
            *p = poisson_gamma_update_step(*p, n);
            Some(*p)
        })
        .collect()
}

/// Posterior under a constant (improper) prior: `Gamma(1 + sum n_i, 1/T)`.
/// Its mode equals the maximum likelihood estimate.
pub fn poisson_gamma_posterior_improper(data: &AnnualCounts) -> Result<GammaParams> {
    if data.years() == 0 {
        return Err(Error::EmptyData("the improper-prior posterior needs at least one year".into()));
    }
    Ok(GammaParams {
        shape: 1.0 + data.total() as f64,
        scale: 1.0 / data.years() as f64,
    })
}

/// Predictive law of next year's count: `NegBin(alpha_T, 1 / (1 + beta_T))`.
pub fn poisson_predictive(posterior: GammaParams) -> NegBinParams {
    NegBinParams {
        size: posterior.shape,
        prob: 1.0 / (1.0 + posterior.scale),
    }
}

/// Posterior mean written as `weight * mle + (1 - weight) * prior_mean`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CredibilityDecomposition {
    pub weight: f64,
    /// Reported as 0 when there is no data; see `mle_defined`.
    pub mle: f64,
    pub mle_defined: bool,
    pub prior_mean: f64,
}

impl CredibilityDecomposition {
    pub fn combined(&self) -> f64 {
        self.weight * self.mle + (1.0 - self.weight) * self.prior_mean
    }
}

/// Credibility weight `w_T = T beta / (T beta + 1)` of the count MLE.
pub fn credibility_decomposition(prior: GammaParams, data: &AnnualCounts) -> CredibilityDecomposition {
    let t = data.years() as f64;
    let tb = t * prior.scale;
    CredibilityDecomposition {
        weight: tb / (tb + 1.0),
        mle: data.mle().unwrap_or(0.0),
        mle_defined: data.mle().is_some(),
        prior_mean: prior.shape * prior.scale,
    }
}

const ALPHA_SEARCH: (f64, f64) = (1e-4, 1e6);

/// Fits `Gamma(alpha, beta)` with `alpha * beta = E` and `F(b) - F(a) = p`.
///
/// `beta` is eliminated through the mean constraint and the coverage is
/// solved for `alpha` by bisection on `ln alpha` over `[1e-4, 1e6]`. An
/// unattainable coverage reports the attainable range; a root pinned to the
/// edge of the search interval is reported as a boundary fit.
pub fn fit_gamma_prior_from_interval(e: &ElicitedInterval) -> Result<GammaParams> {
    let coverage = |alpha: f64| {
        let g = GammaParams { shape: alpha, scale: e.mean_estimate / alpha };
        g.cdf(e.upper) - g.cdf(e.lower)
    };
    let f = |ln_alpha: f64| coverage(ln_alpha.exp()) - e.coverage;

    // Scan a log grid so non-monotone coverage curves still get bracketed.
    let (lo, hi) = (ALPHA_SEARCH.0.ln(), ALPHA_SEARCH.1.ln());
    let steps = 400;
    let grid: Vec<f64> = (0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let (min, max) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
        (a.min(v + e.coverage), b.max(v + e.coverage))
    });

    let bracket = vals
        .windows(2)
        .position(|w| w[0] == 0.0 || w[0].signum() != w[1].signum());
    let Some(i) = bracket else {
        if e.coverage < min && vals[0] > 0.0 || e.coverage > max && vals[steps] < 0.0 {
            // Coverage is beyond what is attained at the ends of the search
            // range; the solution is pushed to a boundary.
            let value = if e.coverage > max { ALPHA_SEARCH.1 } else { ALPHA_SEARCH.0 };
            if coverage_limit_reaches(e, value) {
                return Err(Error::BoundaryFit { parameter: "alpha", value });
            }
        }
        return Err(Error::UnattainableCoverage { requested: e.coverage, min, max });
    };
    let ln_alpha = bisect(f, grid[i], grid[i + 1], 1e-15)?;
    let alpha = ln_alpha.exp();
    GammaParams::new(alpha, e.mean_estimate / alpha)
}

/// Whether coverage tends towards the requested value beyond the given edge:
/// towards 1 for large alpha when the mean is inside the interval, towards 0
/// for small alpha.
fn coverage_limit_reaches(e: &ElicitedInterval, edge: f64) -> bool {
    if edge >= ALPHA_SEARCH.1 {
        e.lower < e.mean_estimate && e.mean_estimate < e.upper
    } else {
        true
    }
}

/// Gamma prior from a mean and a coefficient of variation `Vco = 1/sqrt(alpha)`.
pub fn gamma_prior_from_mean_vco(mean: f64, vco: f64) -> Result<GammaParams> {
    ensure(vco > 0.0 && vco.is_finite(), || format!("Vco must be > 0, got {vco}"))?;
    let alpha = 1.0 / (vco * vco);
    GammaParams::new(alpha, mean / alpha)
}

// ---------------------------------------------------------------------------
// Lognormal-normal (known sigma)
// ---------------------------------------------------------------------------

/// Posterior of the lognormal location:
/// `mu_{0,n} = (mu_0 + omega sum y_i) / (1 + n omega)`,
/// `sigma_{0,n}^2 = sigma_0^2 / (1 + n omega)` with `omega = sigma_0^2 / sigma^2`.
pub fn lognormal_normal_posterior(prior: NormalParams, data: &LogLossSample) -> NormalParams {
    if data.values.is_empty() {
        return prior;
    }
    let n = data.values.len() as f64;
    let omega = prior.variance() / (data.known_sigma * data.known_sigma);
    let sum: f64 = data.values.iter().sum();
    let denom = 1.0 + n * omega;
    NormalParams {
        mean: (prior.mean + omega * sum) / denom,
        stdev: (prior.variance() / denom).sqrt(),
    }
}

/// One observation: `mu_k = (mu_{k-1} + omega_{k-1} y_k) / (1 + omega_{k-1})`,
/// `sigma_k^2 = sigma^2 omega_{k-1} / (1 + omega_{k-1})`.
pub fn lognormal_normal_update_step(posterior: NormalParams, y_k: f64, sigma: f64) -> NormalParams {
    let omega = posterior.variance() / (sigma * sigma);
    NormalParams {
        mean: (posterior.mean + omega * y_k) / (1.0 + omega),
        stdev: (sigma * sigma * omega / (1.0 + omega)).sqrt(),
    }
}

/// `w_n = n / (n + sigma^2 / sigma_0^2)`; the posterior mean is
/// `w_n * mean(y) + (1 - w_n) * mu_0`.
pub fn lognormal_credibility(prior: NormalParams, data: &LogLossSample) -> CredibilityDecomposition {
    let n = data.values.len() as f64;
    let ratio = data.known_sigma * data.known_sigma / prior.variance();
    let mean = (n > 0.0).then(|| data.values.iter().sum::<f64>() / n);
    CredibilityDecomposition {
        weight: n / (n + ratio),
        mle: mean.unwrap_or(0.0),
        mle_defined: mean.is_some(),
        prior_mean: prior.mean,
    }
}

/// Method-of-moments estimate of `sigma` from log-losses (sample standard
/// deviation). A convenience for choosing the known `sigma`; the posterior
/// routines never call it.
pub fn estimate_sigma_moments(log_losses: &[f64]) -> Result<f64> {
    let n = log_losses.len();
    if n < 2 {
        return Err(Error::EmptyData(format!("need at least 2 log-losses, got {n}")));
    }
    let mean = log_losses.iter().sum::<f64>() / n as f64;
    let ss: f64 = log_losses.iter().map(|y| (y - mean).powi(2)).sum();
    Ok((ss / (n as f64 - 1.0)).sqrt())
}

// ---------------------------------------------------------------------------
// Prior transformation
// ---------------------------------------------------------------------------

/// Independent gamma priors on the quantile differences
/// `d_1 = q_1, d_2 = q_2 - q_1, ...` at ascending levels `p_1 < ... < p_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileDifferencePrior {
    pub levels: Vec<f64>,
    pub difference_priors: Vec<GammaParams>,
}

impl QuantileDifferencePrior {
    pub fn new(levels: Vec<f64>, difference_priors: Vec<GammaParams>) -> Result<Self> {
        ensure(!levels.is_empty(), || "need at least one level".into())?;
        ensure(levels.len() == difference_priors.len(), || "one prior per level".into())?;
        ensure(levels.iter().all(|&p| p > 0.0 && p < 1.0), || "levels must lie in (0, 1)".into())?;
        ensure(levels.windows(2).all(|w| w[0] < w[1]), || "levels must be strictly ascending".into())?;
        for g in &difference_priors {
            GammaParams::new(g.shape, g.scale)?;
        }
        Ok(Self { levels, difference_priors })
    }
}

/// A parametric family whose quantiles the expert reasons about.
pub trait QuantileFamily {
    fn n_params(&self) -> usize;
    /// Quantile at level `p` for parameters `theta`, or `None` if `theta` is
    /// outside the parameter space.
    fn quantile(&self, theta: &[f64], p: f64) -> Option<f64>;
}

/// `LN(mu, sigma)` with `theta = (mu, sigma)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LognormalQuantiles;

/// `LN(mu, sigma)` with `sigma` fixed and `theta = (mu)`.
#[derive(Debug, Clone, Copy)]
pub struct LognormalFixedSigma {
    pub sigma: f64,
}

fn std_normal_quantile(p: f64) -> Option<f64> {
    NormalParams::standard().quantile(p).ok()
}

impl QuantileFamily for LognormalQuantiles {
    fn n_params(&self) -> usize {
        2
    }

    fn quantile(&self, theta: &[f64], p: f64) -> Option<f64> {
        let (mu, sigma) = (theta[0], theta[1]);
        (sigma > 0.0).then(|| std_normal_quantile(p).map(|z| (mu + sigma * z).exp()))?
    }
}

impl QuantileFamily for LognormalFixedSigma {
    fn n_params(&self) -> usize {
        1
    }

    fn quantile(&self, theta: &[f64], p: f64) -> Option<f64> {
        std_normal_quantile(p).map(|z| (theta[0] + self.sigma * z).exp())
    }
}

/// Maps model parameters to the characteristics carrying the prior.
pub trait CharacteristicMap {
    fn dim(&self) -> usize;
    fn characteristics(&self, theta: &[f64]) -> Option<Vec<f64>>;
}

/// The identity map: the prior is placed directly on the parameters.
#[derive(Debug, Clone, Copy)]
pub struct IdentityMap(pub usize);

impl CharacteristicMap for IdentityMap {
    fn dim(&self) -> usize {
        self.0
    }

    fn characteristics(&self, theta: &[f64]) -> Option<Vec<f64>> {
        Some(theta.to_vec())
    }
}

/// Quantile differences of a family at fixed levels.
pub struct QuantileDifferenceMap<F> {
    family: F,
    levels: Vec<f64>,
}

impl<F: QuantileFamily> CharacteristicMap for QuantileDifferenceMap<F> {
    fn dim(&self) -> usize {
        self.family.n_params()
    }

    fn characteristics(&self, theta: &[f64]) -> Option<Vec<f64>> {
        let mut prev = 0.0;
        let mut out = Vec::with_capacity(self.levels.len());
        for (i, &p) in self.levels.iter().enumerate() {
            let q = self.family.quantile(theta, p)?;
            out.push(if i == 0 { q } else { q - prev });
            prev = q;
        }
        Some(out)
    }
}

/// Prior density over model parameters induced by independent gamma priors
/// on characteristics `d = g(theta)`:
/// `pi(theta) = prod_i pi_i(d_i(theta)) * |det dg/dtheta|`.
pub struct TransformedPrior<M> {
    priors: Vec<GammaParams>,
    map: M,
}

const SINGULAR_DET: f64 = 1e-12;
const FD_STEP: f64 = 1e-6;

impl<M: CharacteristicMap> TransformedPrior<M> {
    pub fn with_map(priors: Vec<GammaParams>, map: M) -> Result<Self> {
        ensure(priors.len() == map.dim(), || {
            format!("{} priors for a {}-dimensional map", priors.len(), map.dim())
        })?;
        Ok(Self { priors, map })
    }

    /// Jacobian of the map by central differences with relative step 1e-6.
    pub fn jacobian(&self, theta: &[f64]) -> Option<Vec<Vec<f64>>> {
        let n = self.map.dim();
        let mut jac = vec![vec![0.0; n]; n];
        let mut t = theta.to_vec();
        for j in 0..n {
            let h = FD_STEP * theta[j].abs().max(1.0);
            t[j] = theta[j] + h;
            let up = self.map.characteristics(&t)?;
            t[j] = theta[j] - h;
            let down = self.map.characteristics(&t)?;
            t[j] = theta[j];
            for i in 0..n {
                jac[i][j] = (up[i] - down[i]) / (2.0 * h);
            }
        }
        Some(jac)
    }

    /// Density at `theta`. Zero outside the parameter space or when any
    /// characteristic is nonpositive (this enforces quantile ordering).
    pub fn density(&self, theta: &[f64]) -> Result<f64> {
        ensure(theta.len() == self.map.dim(), || "parameter vector has wrong length".into())?;
        let Some(d) = self.map.characteristics(theta) else {
            return Ok(0.0);
        };
        if d.iter().any(|&x| x <= 0.0) {
            return Ok(0.0);
        }
        let Some(jac) = self.jacobian(theta) else {
            return Ok(0.0);
        };
        let det = determinant(jac).abs();
        if det < SINGULAR_DET {
            return Err(Error::SingularJacobian(det));
        }
        let prior: f64 = self.priors.iter().zip(&d).map(|(g, &x)| g.pdf(x)).product();
        Ok(prior * det)
    }
}

/// Transformed prior over the parameters of `family` from gamma priors on
/// quantile differences.
pub fn transform_prior_density<F: QuantileFamily>(
    characteristic_prior: &QuantileDifferencePrior,
    family: F,
) -> Result<TransformedPrior<QuantileDifferenceMap<F>>> {
    ensure(characteristic_prior.levels.len() == family.n_params(), || {
        format!(
            "{} quantile levels for a {}-parameter family",
            characteristic_prior.levels.len(),
            family.n_params()
        )
    })?;
    TransformedPrior::with_map(
        characteristic_prior.difference_priors.clone(),
        QuantileDifferenceMap { family, levels: characteristic_prior.levels.clone() },
    )
}

fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("nonempty range");
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    det
}

// ---------------------------------------------------------------------------
// Empirical Bayes
// ---------------------------------------------------------------------------

/// Conditions detected while fitting hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FitWarning {
    /// Every cell has the same constant count; between-cell spread is zero.
    NonIdentifiable,
    /// The optimum lies at the edge of the search region.
    Boundary { parameter: String, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalBayesFit {
    pub prior: GammaParams,
    pub log_marginal: f64,
    /// Gradient of the log-marginal likelihood in `(alpha, beta)`.
    pub gradient: [f64; 2],
    pub warnings: Vec<FitWarning>,
}

struct CellSummary {
    total: f64,
    years: f64,
}

fn log_marginal(cells: &[CellSummary], alpha: f64, beta: f64) -> f64 {
    cells
        .iter()
        .map(|c| {
            ln_gamma(alpha + c.total) - ln_gamma(alpha) + c.total * beta.ln()
                - (alpha + c.total) * (c.years * beta).ln_1p()
        })
        .sum()
}

fn gradient(cells: &[CellSummary], alpha: f64, beta: f64) -> [f64; 2] {
    let da = cells
        .iter()
        .map(|c| digamma(alpha + c.total) - digamma(alpha) - (c.years * beta).ln_1p())
        .sum();
    let db = cells
        .iter()
        .map(|c| c.total / beta - (alpha + c.total) * c.years / (1.0 + c.years * beta))
        .sum();
    [da, db]
}

/// Scale maximizing the marginal likelihood for fixed shape.
fn profile_beta(cells: &[CellSummary], alpha: f64) -> Result<f64> {
    // beta * dL/dbeta, decreasing in beta.
    let g = |ln_beta: f64| {
        let beta = ln_beta.exp();
        cells
            .iter()
            .map(|c| c.total - (alpha + c.total) * c.years * beta / (1.0 + c.years * beta))
            .sum::<f64>()
    };
    let ln_b = bisect(g, -60.0, 60.0, 1e-15)?;
    Ok(ln_b.exp())
}

/// Fits `Gamma(alpha, beta)` for the intensities of similar risk cells by
/// maximizing the marginal likelihood of all counts. Per cell, integrating
/// the intensity out of the Poisson likelihood gives
/// `Gamma(alpha + S) / Gamma(alpha) * beta^S / (1 + T beta)^(alpha + S)`
/// up to factors free of the hyperparameters (`S` the cell total, `T` its
/// number of years).
pub fn fit_prior_empirical_bayes_poisson(cells: &[AnnualCounts]) -> Result<EmpiricalBayesFit> {
    if cells.len() < 2 {
        return Err(Error::EmptyData(format!("need at least 2 cells, got {}", cells.len())));
    }
    if let Some(i) = cells.iter().position(|c| c.years() == 0) {
        return Err(Error::EmptyData(format!("cell {i} has no observed years")));
    }
    let summaries: Vec<CellSummary> = cells
        .iter()
        .map(|c| CellSummary { total: c.total() as f64, years: c.years() as f64 })
        .collect();
    let mut warnings = Vec::new();

    let first = cells[0].counts[0];
    if cells.iter().all(|c| c.counts.iter().all(|&n| n == first)) {
        warnings.push(FitWarning::NonIdentifiable);
    }

    if summaries.iter().all(|c| c.total == 0.0) {
        // Likelihood increases as beta -> 0 for any alpha.
        let alpha = 1.0;
        let beta = 1e-12;
        warnings.push(FitWarning::Boundary { parameter: "beta".into(), value: 0.0 });
        return Ok(EmpiricalBayesFit {
            prior: GammaParams { shape: alpha, scale: beta },
            log_marginal: log_marginal(&summaries, alpha, beta),
            gradient: gradient(&summaries, alpha, beta),
            warnings,
        });
    }

    // Profile derivative in alpha at the optimal beta.
    let profile_slope = |ln_alpha: f64| -> f64 {
        let alpha = ln_alpha.exp();
        match profile_beta(&summaries, alpha) {
            Ok(beta) => gradient(&summaries, alpha, beta)[0],
            Err(_) => f64::NAN,
        }
    };
    let (lo, hi) = (ALPHA_SEARCH.0.ln(), ALPHA_SEARCH.1.ln());
    let s_lo = profile_slope(lo);
    let s_hi = profile_slope(hi);
    let ln_alpha = if s_hi > 0.0 {
        warnings.push(FitWarning::Boundary { parameter: "alpha".into(), value: ALPHA_SEARCH.1 });
        hi
    } else if s_lo < 0.0 {
        warnings.push(FitWarning::Boundary { parameter: "alpha".into(), value: ALPHA_SEARCH.0 });
        lo
    } else {
        bisect(profile_slope, lo, hi, 1e-14)?
    };
    let alpha = ln_alpha.exp();
    let beta = profile_beta(&summaries, alpha)?;
    Ok(EmpiricalBayesFit {
        prior: GammaParams::new(alpha, beta)?,
        log_marginal: log_marginal(&summaries, alpha, beta),
        gradient: gradient(&summaries, alpha, beta),
        warnings,
    })
}
