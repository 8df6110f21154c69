//! Reference computations used as oracles. Deliberately simple and
//! independent of the library's own numerics.
#![allow(dead_code)]

/// Composite Simpson rule with `n` (even) panels on `[a, b]`.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// `∫_0^∞ f(x) dx` through `x = e^t`, with the `t` range grown until the
/// integrand is negligible at both ends.
pub fn integrate_positive<F: Fn(f64) -> f64>(f: F, center: f64, n: usize) -> f64 {
    let g = |t: f64| {
        let x = t.exp();
        let v = f(x) * x;
        if v.is_finite() { v } else { 0.0 }
    };
    let c = center.ln();
    let peak = (-400..=400).map(|i| g(c + i as f64 * 0.1)).fold(0.0, f64::max);
    let mut lo = c - 1.0;
    while g(lo) > 1e-18 * peak || g(lo - 0.5) > 1e-18 * peak {
        lo -= 1.0;
    }
    let mut hi = c + 1.0;
    while g(hi) > 1e-18 * peak || g(hi + 0.5) > 1e-18 * peak {
        hi += 1.0;
    }
    simpson(g, lo, hi, n)
}

/// Mean and variance of an unnormalised density tabulated on a uniform grid.
pub fn grid_moments<F: Fn(f64) -> f64>(log_density: F, a: f64, b: f64, n: usize) -> (f64, f64) {
    let h = (b - a) / n as f64;
    let xs: Vec<f64> = (0..=n).map(|i| a + h * i as f64).collect();
    let lds: Vec<f64> = xs.iter().map(|&x| log_density(x)).collect();
    let m = lds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = lds.iter().map(|l| (l - m).exp()).collect();
    let simpson_w = |i: usize| if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
    let (mut z, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for i in 0..=n {
        let wi = w[i] * simpson_w(i);
        z += wi;
        s1 += wi * xs[i];
        s2 += wi * xs[i] * xs[i];
    }
    let mean = s1 / z;
    (mean, s2 / z - mean * mean)
}

/// `P[D_n < d]` for the two-sided one-sample Kolmogorov statistic, by the
/// matrix method of Marsaglia, Tsang and Wang.
pub fn kolmogorov_cdf(n: usize, d: f64) -> f64 {
    let nd = n as f64 * d;
    let k = nd.floor() as usize + 1;
    let m = 2 * k - 1;
    let h = k as f64 - nd;
    let mut hm = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i + 1 >= j {
                hm[i][j] = 1.0;
            }
        }
    }
    for i in 0..m {
        hm[i][0] -= h.powi(i as i32 + 1);
        hm[m - 1][i] -= h.powi((m - i) as i32);
    }
    if 2.0 * h - 1.0 > 0.0 {
        hm[m - 1][0] += (2.0 * h - 1.0).powi(m as i32);
    }
    for i in 0..m {
        for j in 0..m {
            if i + 1 > j {
                let mut f = 1.0;
                for g in 1..=(i + 1 - j) {
                    f *= g as f64;
                }
                hm[i][j] /= f;
            }
        }
    }
    let mul = |a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>| {
        let mut c = vec![vec![0.0; m]; m];
        for i in 0..m {
            for l in 0..m {
                if a[i][l] != 0.0 {
                    for j in 0..m {
                        c[i][j] += a[i][l] * b[l][j];
                    }
                }
            }
        }
        c
    };
    let mut p = hm.clone();
    for _ in 1..n {
        p = mul(&p, &hm);
    }
    let mut s = p[k - 1][k - 1];
    for i in 1..=n {
        s *= i as f64 / n as f64;
    }
    s
}

/// Solves `P[D_n <= d] = 1 - alpha` by bisection on the exact law.
pub fn kolmogorov_critical(n: usize, alpha: f64) -> f64 {
    let (mut lo, mut hi) = (0.5 / n as f64, 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_cdf(n, mid) < 1.0 - alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Standard normal cdf: erf series below 3, continued fraction above.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 3.0 {
        // Taylor series of erf.
        let mut sum = x;
        let mut term = x;
        let mut k = 0.0;
        while term.abs() > 1e-17 * sum.abs() {
            k += 1.0;
            term *= -x * x / k;
            sum += term / (2.0 * k + 1.0);
        }
        return 1.0 - 2.0 / std::f64::consts::PI.sqrt() * sum;
    }
    // Lentz continued fraction.
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for i in 1..200 {
        let a = i as f64 / 2.0;
        d = x + a * d;
        d = 1.0 / d;
        c = x + a / c;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (f * std::f64::consts::PI.sqrt())
}
