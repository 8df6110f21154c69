use rand::Rng;
use rand_distr::{Distribution, Gamma, LogNormal, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::distributions::{
    gig_mean, ContinuousDistribution, GammaParams, Gig, GigParams, LognormalParams, NegBinParams,
    NormalParams, PhiZero,
};
use crate::error::{ensure, Error, Result};
use crate::numeric::{integrate, QuadTolerance};

/// How posterior uncertainty enters the simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimulationMode {
    /// Parameters fixed at their posterior means.
    PluginMean,
    /// Parameters drawn from the posterior once per simulated year.
    FullPredictive,
}

impl SimulationMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SimulationMode::PluginMean => "plugin_mean",
            SimulationMode::FullPredictive => "full_predictive",
        }
    }
}

impl std::str::FromStr for SimulationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plugin_mean" => Ok(SimulationMode::PluginMean),
            "full_predictive" => Ok(SimulationMode::FullPredictive),
            _ => Err(Error::InvalidParameter(format!("unknown simulation mode '{s}'"))),
        }
    }
}

/// Annual event-count law of a risk cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyModel {
    Poisson { lambda: f64 },
    NegBin(NegBinParams),
    /// Poisson with a gamma posterior on the intensity.
    PosteriorGamma(GammaParams),
    /// Poisson with a GIG posterior on the intensity.
    PosteriorGig(GigParams),
}

impl FrequencyModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            FrequencyModel::Poisson { lambda } => {
                ensure(*lambda >= 0.0 && lambda.is_finite(), || format!("intensity must be >= 0, got {lambda}"))
            }
            FrequencyModel::NegBin(p) => NegBinParams::new(p.size, p.prob).map(|_| ()),
            FrequencyModel::PosteriorGamma(g) => GammaParams::new(g.shape, g.scale).map(|_| ()),
            FrequencyModel::PosteriorGig(g) => GigParams::new(g.nu, g.omega, g.phi).map(|_| ()),
        }
    }

    /// `E[N]`.
    pub fn mean(&self) -> Result<f64> {
        Ok(match self {
            FrequencyModel::Poisson { lambda } => *lambda,
            FrequencyModel::NegBin(p) => p.size * (1.0 - p.prob) / p.prob,
            FrequencyModel::PosteriorGamma(g) => g.shape * g.scale,
            FrequencyModel::PosteriorGig(g) => gig_mean(g, PhiZero::GammaLimit)?,
        })
    }
}

/// Loss-amount law of a risk cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeverityModel {
    Lognormal(LognormalParams),
    /// Lognormal with known `sigma` and a normal posterior on `mu`.
    PosteriorLognormal { mu: NormalParams, sigma: f64 },
    /// Every loss equals `value`.
    Degenerate(f64),
    /// Weighted mixture; weights sum to one.
    Mixture(Vec<(f64, SeverityModel)>),
}

impl SeverityModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            SeverityModel::Lognormal(p) => LognormalParams::new(p.mu, p.sigma).map(|_| ()),
            SeverityModel::PosteriorLognormal { mu, sigma } => {
                NormalParams::new(mu.mean, mu.stdev)?;
                ensure(*sigma > 0.0, || format!("sigma must be > 0, got {sigma}"))
            }
            SeverityModel::Degenerate(v) => {
                ensure(*v >= 0.0 && v.is_finite(), || format!("degenerate loss must be >= 0, got {v}"))
            }
            SeverityModel::Mixture(parts) => {
                ensure(!parts.is_empty(), || "mixture needs at least one component".into())?;
                ensure(parts.iter().all(|(w, _)| *w >= 0.0), || "mixture weights must be >= 0".into())?;
                let total: f64 = parts.iter().map(|(w, _)| w).sum();
                ensure((total - 1.0).abs() <= 1e-12, || format!("mixture weights sum to {total}"))?;
                parts.iter().try_for_each(|(_, m)| m.validate())
            }
        }
    }

    /// Predictive distribution function of a single loss.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            SeverityModel::Lognormal(p) => p.cdf(x),
            SeverityModel::PosteriorLognormal { mu, sigma } => LognormalParams {
                mu: mu.mean,
                sigma: (sigma * sigma + mu.variance()).sqrt(),
            }
            .cdf(x),
            SeverityModel::Degenerate(v) => f64::from(u8::from(x >= *v)),
            SeverityModel::Mixture(parts) => parts.iter().map(|(w, m)| w * m.cdf(x)).sum(),
        }
    }

    /// Predictive mean of a single loss.
    pub fn mean(&self) -> f64 {
        match self {
            SeverityModel::Lognormal(p) => p.mean(),
            SeverityModel::PosteriorLognormal { mu, sigma } => {
                (mu.mean + 0.5 * (sigma * sigma + mu.variance())).exp()
            }
            SeverityModel::Degenerate(v) => *v,
            SeverityModel::Mixture(parts) => parts.iter().map(|(w, m)| w * m.mean()).sum(),
        }
    }
}

/// One business-line / event-type cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskCellModel {
    pub label: String,
    pub frequency: FrequencyModel,
    pub severity: SeverityModel,
}

impl RiskCellModel {
    pub fn new(label: impl Into<String>, frequency: FrequencyModel, severity: SeverityModel) -> Result<Self> {
        frequency.validate()?;
        severity.validate()?;
        Ok(Self { label: label.into(), frequency, severity })
    }

    /// `E[Z] = E[N] E[X]`.
    pub fn expected_annual_loss(&self) -> Result<f64> {
        Ok(self.frequency.mean()? * self.severity.mean())
    }
}

// ---------------------------------------------------------------------------
// Samplers prepared once per simulation
// ---------------------------------------------------------------------------

const GIG_TABLE_NODES: usize = 4096;
const GIG_TAIL_CUT: f64 = 40.0;

/// Inverse-cdf sampler for a GIG law from a tabulated cdf on a log-spaced
/// grid, linear between nodes.
#[derive(Debug, Clone)]
pub(crate) struct GigTable {
    xs: Vec<f64>,
    cum: Vec<f64>,
}

impl GigTable {
    pub(crate) fn new(params: GigParams) -> Result<Self> {
        let gig = Gig::new(params)?;
        let mode = gig.mode().max(f64::MIN_POSITIVE);
        let peak = gig.ln_pdf(mode);
        let below = |x: f64| gig.ln_pdf(x) - peak < -GIG_TAIL_CUT;
        let mut lo = mode;
        while !below(lo) && lo > 1e-300 {
            lo *= 0.5;
        }
        let mut hi = mode.max(1e-300) * 2.0;
        while !below(hi) {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::Numerical("GIG upper tail does not decay".into()));
            }
        }
        let (llo, lhi) = (lo.ln(), hi.ln());
        let xs: Vec<f64> = (0..=GIG_TABLE_NODES)
            .map(|i| (llo + (lhi - llo) * i as f64 / GIG_TABLE_NODES as f64).exp())
            .collect();
        let tol = QuadTolerance::new(1e-300, 1e-10);
        let mut cum = Vec::with_capacity(xs.len());
        let mut acc = 0.0;
        cum.push(0.0);
        for w in xs.windows(2) {
            acc += integrate(|x| gig.pdf(x), w[0], w[1], tol)?;
            cum.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::Numerical("GIG table has no mass".into()));
        }
        for c in &mut cum {
            *c /= acc;
        }
        Ok(Self { xs, cum })
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let i = self.cum.partition_point(|&c| c <= u).clamp(1, self.cum.len() - 1);
        let (c0, c1) = (self.cum[i - 1], self.cum[i]);
        let t = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.0 };
        self.xs[i - 1] + t * (self.xs[i] - self.xs[i - 1])
    }
}

#[derive(Debug, Clone)]
enum IntensitySampler {
    Fixed(f64),
    Gamma(Gamma<f64>),
    Gig(Box<GigTable>),
}

#[derive(Debug, Clone)]
pub(crate) struct FrequencySampler {
    intensity: IntensitySampler,
}

impl FrequencySampler {
    pub(crate) fn new(model: &FrequencyModel, mode: SimulationMode) -> Result<Self> {
        let gamma = |shape: f64, scale: f64| {
            Gamma::new(shape, scale).map_err(|e| Error::InvalidParameter(format!("gamma sampler: {e}")))
        };
        let intensity = match (model, mode) {
            (FrequencyModel::Poisson { lambda }, _) => IntensitySampler::Fixed(*lambda),
            // The negative binomial is itself the gamma-Poisson mixture.
            (FrequencyModel::NegBin(p), _) => IntensitySampler::Gamma(gamma(p.size, (1.0 - p.prob) / p.prob)?),
            (FrequencyModel::PosteriorGamma(g), SimulationMode::PluginMean) => {
                IntensitySampler::Fixed(g.shape * g.scale)
            }
            (FrequencyModel::PosteriorGamma(g), SimulationMode::FullPredictive) => {
                IntensitySampler::Gamma(gamma(g.shape, g.scale)?)
            }
            (FrequencyModel::PosteriorGig(g), SimulationMode::PluginMean) => {
                IntensitySampler::Fixed(gig_mean(g, PhiZero::GammaLimit)?)
            }
            (FrequencyModel::PosteriorGig(g), SimulationMode::FullPredictive) => {
                if g.phi == 0.0 {
                    let limit = g.gamma_limit()?;
                    IntensitySampler::Gamma(gamma(limit.shape, limit.scale)?)
                } else {
                    IntensitySampler::Gig(Box::new(GigTable::new(*g)?))
                }
            }
        };
        Ok(Self { intensity })
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let lambda = match &self.intensity {
            IntensitySampler::Fixed(l) => *l,
            IntensitySampler::Gamma(g) => g.sample(rng),
            IntensitySampler::Gig(t) => t.sample(rng),
        };
        if !(lambda > 0.0) {
            return 0;
        }
        // rand_distr's Poisson rejects intensities it cannot represent.
        match Poisson::new(lambda) {
            Ok(p) => p.sample(rng) as u64,
            Err(_) => lambda.round() as u64,
        }
    }
}

/// Severity sampler with per-year parameters fixed.
#[derive(Debug, Clone)]
pub(crate) enum YearSeverity {
    Lognormal(LogNormal<f64>),
    Degenerate(f64),
    Mixture(Vec<(f64, YearSeverity)>),
}

impl YearSeverity {
    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            YearSeverity::Lognormal(d) => d.sample(rng),
            YearSeverity::Degenerate(v) => *v,
            YearSeverity::Mixture(parts) => {
                let u: f64 = rng.random();
                let i = parts.partition_point(|(c, _)| *c <= u).min(parts.len() - 1);
                parts[i].1.sample(rng)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum SeveritySampler {
    Fixed(YearSeverity),
    /// `mu` drawn each year.
    PosteriorMu { mu: Normal<f64>, sigma: f64 },
    Mixture(Vec<(f64, SeveritySampler)>),
}

fn lognormal(mu: f64, sigma: f64) -> Result<LogNormal<f64>> {
    LogNormal::new(mu, sigma).map_err(|e| Error::InvalidParameter(format!("lognormal sampler: {e}")))
}

impl SeveritySampler {
    pub(crate) fn new(model: &SeverityModel, mode: SimulationMode) -> Result<Self> {
        Ok(match model {
            SeverityModel::Lognormal(p) => SeveritySampler::Fixed(YearSeverity::Lognormal(lognormal(p.mu, p.sigma)?)),
            SeverityModel::Degenerate(v) => SeveritySampler::Fixed(YearSeverity::Degenerate(*v)),
            SeverityModel::PosteriorLognormal { mu, sigma } => match mode {
                SimulationMode::PluginMean => {
                    SeveritySampler::Fixed(YearSeverity::Lognormal(lognormal(mu.mean, *sigma)?))
                }
                SimulationMode::FullPredictive => SeveritySampler::PosteriorMu {
                    mu: Normal::new(mu.mean, mu.stdev)
                        .map_err(|e| Error::InvalidParameter(format!("normal sampler: {e}")))?,
                    sigma: *sigma,
                },
            },
            SeverityModel::Mixture(parts) => {
                let mut acc = 0.0;
                let mut out = Vec::with_capacity(parts.len());
                for (w, m) in parts {
                    acc += w;
                    out.push((acc, SeveritySampler::new(m, mode)?));
                }
                SeveritySampler::Mixture(out)
            }
        })
    }

    /// Fixes the parameters for one simulated year.
    pub(crate) fn for_year<R: Rng + ?Sized>(&self, rng: &mut R) -> YearSeverity {
        match self {
            SeveritySampler::Fixed(s) => s.clone(),
            SeveritySampler::PosteriorMu { mu, sigma } => {
                let m = mu.sample(rng);
                YearSeverity::Lognormal(LogNormal::new(m, *sigma).expect("sigma validated"))
            }
            SeveritySampler::Mixture(parts) => {
                YearSeverity::Mixture(parts.iter().map(|(c, s)| (*c, s.for_year(rng))).collect())
            }
        }
    }
}
