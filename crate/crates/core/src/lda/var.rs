use serde::{Deserialize, Serialize};

use crate::distributions::ContinuousDistribution;
use crate::error::{ensure, Error, Result};

/// Order-statistic quantile estimate and its asymptotic standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarEstimate {
    pub value: f64,
    pub stderr: f64,
}

/// Share of the sample, nearest in rank to the quantile, used to estimate
/// the density there.
const KERNEL_WINDOW: f64 = 0.05;

/// `VaR_q` as the order statistic `X_(floor(n q) + 1)` with standard error
/// `sqrt(q (1 - q)) / (f(VaR_q) sqrt(n))`.
///
/// `f` is a Gaussian kernel estimate with Silverman's bandwidth on the 5%
/// of the sample closest in rank to the quantile (the top 5% for `q` near
/// one).
pub fn var_quantile(sample: &[f64], q: f64) -> Result<VarEstimate> {
    ensure(q > 0.0 && q < 1.0, || format!("quantile level must lie in (0, 1), got {q}"))?;
    if sample.is_empty() {
        return Err(Error::EmptyData("cannot take a quantile of an empty sample".into()));
    }
    ensure(sample.iter().all(|x| !x.is_nan()), || "sample contains NaN".into())?;
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    Ok(var_quantile_sorted(&xs, q))
}

/// As [`var_quantile`] for an already sorted, nonempty sample.
pub fn var_quantile_sorted(xs: &[f64], q: f64) -> VarEstimate {
    let n = xs.len();
    let k = ((n as f64 * q).floor() as usize).min(n - 1);
    let value = xs[k];
    let f = density_at(xs, k);
    let stderr = if f > 0.0 && f.is_finite() {
        (q * (1.0 - q)).sqrt() / (f * (n as f64).sqrt())
    } else {
        0.0
    };
    VarEstimate { value, stderr }
}

fn density_at(xs: &[f64], k: usize) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let m = ((KERNEL_WINDOW * n as f64).ceil() as usize).clamp(2.min(n), n);
    let start = k.saturating_sub(m / 2).min(n - m);
    let w = &xs[start..start + m];
    let mean = w.iter().sum::<f64>() / m as f64;
    let sd = (w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m as f64 - 1.0).max(1.0)).sqrt();
    let iqr = w[(3 * m) / 4] - w[m / 4];
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    let h = 0.9 * spread * (m as f64).powf(-0.2);
    if !(h > 0.0) {
        return f64::INFINITY;
    }
    let x0 = xs[k];
    let norm = 1.0 / (n as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    norm * w.iter().map(|x| (-0.5 * ((x0 - x) / h).powi(2)).exp()).sum::<f64>()
}

/// Severity level `p = 1 - (1 - q) / E[N]` whose severity quantile
/// approximates the annual-loss quantile at `q` for heavy tails.
pub fn single_loss_quantile_level(q: f64, expected_n: f64) -> Result<f64> {
    ensure(q > 0.0 && q < 1.0, || format!("q must lie in (0, 1), got {q}"))?;
    ensure(expected_n > 0.0 && expected_n.is_finite(), || {
        format!("expected count must be > 0, got {expected_n}")
    })?;
    ensure((1.0 - q) / expected_n < 1.0, || "need (1 - q) / E[N] < 1".into())?;
    Ok((expected_n - 1.0 + q) / expected_n)
}

/// Observations `n = 4 q (1 - q) / (eps^2 (f(x_q) x_q)^2)` for the empirical
/// quantile at level `q` to be within relative error `eps` (two standard
/// errors).
pub fn data_sufficiency_exact<D: ContinuousDistribution + ?Sized>(q: f64, eps: f64, severity: &D) -> Result<f64> {
    ensure(eps > 0.0 && eps.is_finite(), || format!("epsilon must be > 0, got {eps}"))?;
    let fq = quantile_scale(q, severity)?;
    Ok(4.0 * q * (1.0 - q) / (eps * eps * fq * fq))
}

/// [`data_sufficiency_exact`] rounded to the nearest integer.
pub fn data_sufficiency<D: ContinuousDistribution + ?Sized>(q: f64, eps: f64, severity: &D) -> Result<u64> {
    Ok(data_sufficiency_exact(q, eps, severity)?.round() as u64)
}

/// Relative error attained with `n` observations; inverse of
/// [`data_sufficiency_exact`].
pub fn sufficiency_epsilon<D: ContinuousDistribution + ?Sized>(q: f64, n: u64, severity: &D) -> Result<f64> {
    ensure(n >= 1, || "sample size must be at least 1".into())?;
    let fq = quantile_scale(q, severity)?;
    Ok((4.0 * q * (1.0 - q) / n as f64).sqrt() / fq)
}

/// `f(x_q) x_q`.
fn quantile_scale<D: ContinuousDistribution + ?Sized>(q: f64, severity: &D) -> Result<f64> {
    let x = severity.quantile(q)?;
    let fq = severity.pdf(x) * x;
    if !(fq > 0.0 && fq.is_finite()) {
        return Err(Error::Numerical(format!("density times quantile is {fq} at level {q}")));
    }
    Ok(fq)
}

/// One histogram bin `[lo, hi)`; the last bin is closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

/// Equal-width histogram over the sample range.
pub fn histogram(sample: &[f64], bins: usize) -> Result<Vec<HistogramBin>> {
    ensure(bins >= 1, || "need at least one bin".into())?;
    if sample.is_empty() {
        return Err(Error::EmptyData("cannot bin an empty sample".into()));
    }
    let lo = sample.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let mut counts = vec![0u64; bins];
    for &x in sample {
        let i = (((x - lo) / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            lo: lo + width * i as f64,
            hi: if i + 1 == bins { hi.max(lo + width) } else { lo + width * (i + 1) as f64 },
            count,
        })
        .collect())
}
