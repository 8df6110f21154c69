//! Numerical building blocks: adaptive Gauss-Kronrod quadrature, bracketed
//! root finding, cdf inversion and compensated summation.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

const MAX_SEGMENTS: usize = 4000;

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadTolerance {
    pub abs: f64,
    pub rel: f64,
}

impl QuadTolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }
}

impl Default for QuadTolerance {
    fn default() -> Self {
        Self::new(1e-12, 1e-10)
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over the finite interval `[a, b]` with globally adaptive
/// 15-point Gauss-Kronrod bisection.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: QuadTolerance) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "integration bounds must be finite, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut segments = vec![gk15(&f, a, b)];
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.error).sum();
        if !total.is_finite() {
            return Err(Error::Numerical(format!(
                "integrand is not finite on [{a}, {b}]"
            )));
        }
        if err <= tol.abs.max(tol.rel * total.abs()) {
            return Ok(total);
        }
        if segments.len() >= MAX_SEGMENTS {
            // Accept if the remaining error is at round-off level.
            if err <= 1e3 * f64::EPSILON * total.abs() {
                return Ok(total);
            }
            return Err(Error::Numerical(format!(
                "quadrature did not converge on [{a}, {b}]: value {total}, error {err}"
            )));
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("segments is never empty");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // Interval cannot be split further in floating point.
            segments.push(Segment { error: 0.0, ..s });
            continue;
        }
        segments.push(gk15(&f, s.a, mid));
        segments.push(gk15(&f, mid, s.b));
    }
}

/// Bisection for a sign change of `f` on `[lo, hi]`. Stops when the bracket
/// is narrower than `x_tol` (absolute) or cannot shrink further.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Numerical(format!(
            "root is not bracketed on [{lo}, {hi}] (f = {f_lo}, {f_hi})"
        )));
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= x_tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Inverts a continuous cdf at probability `p`: bracket expansion from
/// `start`, bisection to 1e-10 in probability, then Newton polish with the
/// density, kept inside the final bracket.
pub fn invert_cdf<C, D>(cdf: C, pdf: D, p: f64, support: (f64, f64), start: f64) -> Result<f64>
where
    C: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "probability must lie in (0, 1), got {p}"
        )));
    }
    let (lo_bound, hi_bound) = support;
    // Bracket.
    let mut lo;
    let mut hi;
    let step0 = start.abs().max(1.0);
    if cdf(start) < p {
        lo = start;
        let mut step = step0;
        hi = start + step;
        while hi < hi_bound && cdf(hi) < p {
            lo = hi;
            step *= 2.0;
            hi = start + step;
            if !hi.is_finite() {
                return Err(Error::Numerical(format!("cannot bracket quantile {p}")));
            }
        }
        hi = hi.min(hi_bound);
    } else {
        hi = start;
        if lo_bound.is_finite() {
            lo = lo_bound;
        } else {
            let mut step = step0;
            lo = start - step;
            while cdf(lo) >= p {
                hi = lo;
                step *= 2.0;
                lo = start - step;
                if !lo.is_finite() {
                    return Err(Error::Numerical(format!("cannot bracket quantile {p}")));
                }
            }
        }
    }
    // Bisection until the cdf matches to 1e-10 (relative to the nearer tail).
    let p_tol = 1e-10 * p.min(1.0 - p);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..400 {
        x = 0.5 * (lo + hi);
        if x <= lo || x >= hi {
            break;
        }
        let c = cdf(x);
        if (c - p).abs() <= p_tol {
            break;
        }
        if c < p {
            lo = x;
        } else {
            hi = x;
        }
    }
    // Newton polish inside the bracket.
    for _ in 0..50 {
        let d = pdf(x);
        if !(d > 0.0) || !d.is_finite() {
            break;
        }
        let next = x - (cdf(x) - p) / d;
        if !(next >= lo && next <= hi) {
            break;
        }
        if (next - x).abs() <= 1e-15 * x.abs().max(1e-300) {
            x = next;
            break;
        }
        x = next;
    }
    Ok(x)
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = KahanSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of a slice.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<KahanSum>().value()
}

/// Sums values after sorting, so the result does not depend on input order.
pub fn order_independent_sum(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    compensated_sum(&v)
}
