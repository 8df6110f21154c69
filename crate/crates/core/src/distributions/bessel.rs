//! Modified Bessel function of the third kind, K_nu(z), evaluated from its
//! integral representation
//!
//! ```text
//! K_{nu+1}(z) = 1/2 * int_0^inf u^nu exp(-z (u + 1/u) / 2) du
//! ```
//!
//! With `u = e^t` this becomes `K_nu(z) = int_0^inf cosh(nu t) exp(-z cosh t) dt`.
//! The integrand is log-concave in the sense that its logarithm has a single
//! maximum on `[0, inf)`, so we locate the peak, factor it out and integrate
//! the rescaled integrand. Working in log space keeps `ln K` accurate when
//! `K` itself would overflow (large order) or underflow (large argument).

use crate::error::{Error, Result};
use crate::numeric::{bisect, integrate, QuadTolerance};

/// Integrand mass outside `[t_lo, t_hi]` is below `exp(-TAIL_CUT)` of the peak.
const TAIL_CUT: f64 = 60.0;

const TOL: QuadTolerance = QuadTolerance::new(1e-300, 1e-14);

fn ln_cosh(a: f64) -> f64 {
    let a = a.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// `K_nu(z)` for real order `nu` and `z > 0`.
pub fn bessel_k(nu: f64, z: f64) -> Result<f64> {
    Ok(ln_bessel_k(nu, z)?.exp())
}

/// `ln K_nu(z)` for real order `nu` and `z > 0`.
pub fn ln_bessel_k(nu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("bessel_k requires z > 0, got {z}")));
    }
    if !nu.is_finite() {
        return Err(Error::Domain(format!("bessel_k requires finite order, got {nu}")));
    }
    // K_{-nu} = K_nu
    let nu = nu.abs();
    let h = |t: f64| ln_cosh(nu * t) - z * t.cosh();

    let t_peak = if nu * nu <= z {
        0.0
    } else {
        let dh = |t: f64| nu * (nu * t).tanh() - z * t.sinh();
        // dh(t) <= nu - z sinh t, so the peak is below asinh(nu/z); widen
        // slightly in case round-off leaves dh positive there.
        let mut hi = (nu / z).asinh();
        while dh(hi) >= 0.0 {
            hi = hi * 1.01 + 1e-12;
        }
        let lo = (hi * 1e-12).max(f64::MIN_POSITIVE);
        if dh(lo) <= 0.0 {
            0.0
        } else {
            bisect(dh, lo, hi, 1e-15 * hi.max(1.0))?
        }
    };
    let h_peak = h(t_peak);

    let mut width = 1e-3_f64.max(1.0 / (z * t_peak.cosh()).max(1e-300).sqrt().min(1e6));
    let mut t_hi = t_peak + width;
    while h(t_hi) - h_peak > -TAIL_CUT {
        width *= 2.0;
        t_hi = t_peak + width;
        if !t_hi.is_finite() || width > 1e4 {
            return Err(Error::Numerical(format!(
                "bessel_k: integrand does not decay for nu={nu}, z={z}"
            )));
        }
    }
    let t_lo = if t_peak > 0.0 && h(0.0) - h_peak < -TAIL_CUT {
        bisect(|t| h(t) - h_peak + TAIL_CUT, 0.0, t_peak, 1e-14 * t_peak)?
    } else {
        0.0
    };

    let g = |t: f64| (h(t) - h_peak).exp();
    let mut total = integrate(g, t_peak, t_hi, TOL)?;
    if t_peak > t_lo {
        total += integrate(g, t_lo, t_peak, TOL)?;
    }
    Ok(h_peak + total.ln())
}
