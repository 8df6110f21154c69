use super::pbox::PBox;
use super::BoundKind;
use crate::error::{ensure, Result};

/// Significance levels with exact critical values.
pub const KS_TABLE_ALPHAS: [f64; 4] = [0.2, 0.1, 0.05, 0.01];

/// Largest sample size covered by the exact table.
pub const KS_TABLE_MAX_N: usize = 40;

// Two-sided one-sample critical values D(alpha, n), n = 1..=40, from the
// exact finite-sample distribution of D_n, rounded to 5 decimals.
const KS_TABLE: [[f64; KS_TABLE_MAX_N]; 4] = [
    [
        0.90000, 0.68377, 0.56481, 0.49265, 0.44697, 0.41035, 0.38145, 0.35829, 0.33907, 0.32257,
        0.30826, 0.29573, 0.28466, 0.27477, 0.26585, 0.25775, 0.25035, 0.24356, 0.23731, 0.23152,
        0.22614, 0.22112, 0.21642, 0.21201, 0.20787, 0.20396, 0.20026, 0.19676, 0.19344, 0.19029,
        0.18728, 0.18442, 0.18168, 0.17906, 0.17655, 0.17415, 0.17184, 0.16963, 0.16749, 0.16544,
    ],
    [
        0.95000, 0.77639, 0.63604, 0.56522, 0.50945, 0.46799, 0.43607, 0.40962, 0.38746, 0.36866,
        0.35242, 0.33815, 0.32549, 0.31417, 0.30397, 0.29472, 0.28627, 0.27851, 0.27135, 0.26473,
        0.25857, 0.25283, 0.24746, 0.24242, 0.23767, 0.23320, 0.22897, 0.22497, 0.22117, 0.21756,
        0.21412, 0.21084, 0.20771, 0.20471, 0.20185, 0.19910, 0.19646, 0.19392, 0.19148, 0.18913,
    ],
    [
        0.97500, 0.84189, 0.70760, 0.62394, 0.56328, 0.51926, 0.48342, 0.45427, 0.43001, 0.40925,
        0.39122, 0.37543, 0.36143, 0.34890, 0.33760, 0.32733, 0.31796, 0.30936, 0.30143, 0.29408,
        0.28724, 0.28087, 0.27490, 0.26931, 0.26404, 0.25907, 0.25438, 0.24993, 0.24571, 0.24170,
        0.23788, 0.23424, 0.23076, 0.22743, 0.22425, 0.22119, 0.21826, 0.21544, 0.21273, 0.21012,
    ],
    [
        0.99500, 0.92929, 0.82900, 0.73424, 0.66853, 0.61661, 0.57581, 0.54179, 0.51332, 0.48893,
        0.46770, 0.44905, 0.43247, 0.41762, 0.40420, 0.39201, 0.38086, 0.37062, 0.36117, 0.35241,
        0.34426, 0.33666, 0.32954, 0.32286, 0.31657, 0.31063, 0.30502, 0.29971, 0.29466, 0.28986,
        0.28529, 0.28094, 0.27677, 0.27279, 0.26897, 0.26532, 0.26180, 0.25843, 0.25518, 0.25205,
    ],
];

/// Critical value `D(alpha, n)` with `P[D_n <= D] = 1 - alpha`.
///
/// Exact for `n <= 40` at the tabulated levels; otherwise the asymptotic
/// `sqrt(-ln(alpha/2) / (2n))`. The asymptotic value is slightly larger
/// than the exact one near `n = 40`, so the sequence is not monotone across
/// the switch (e.g. 0.21012 at n = 40 and 0.21210 at n = 41 for alpha = 0.05).
pub fn ks_critical_value(alpha: f64, n: usize) -> Result<f64> {
    ensure(alpha > 0.0 && alpha < 1.0, || format!("alpha must lie in (0, 1), got {alpha}"))?;
    ensure(n >= 1, || "sample size must be at least 1".into())?;
    if n <= KS_TABLE_MAX_N {
        if let Some(row) = KS_TABLE_ALPHAS.iter().position(|&a| (a - alpha).abs() < 1e-12) {
            return Ok(KS_TABLE[row][n - 1]);
        }
    }
    Ok((-(alpha / 2.0).ln() / (2.0 * n as f64)).sqrt())
}

/// Band `max(0, F_n - D) <= F <= min(1, F_n + D)` around the empirical cdf
/// at confidence `1 - alpha`. With `support = Some((lo, hi))` the upper
/// bound is zero below `lo` and the lower bound is one from `hi`; without
/// it the tails extend to infinity.
pub fn ks_bounds(samples: &[f64], alpha: f64, support: Option<(f64, f64)>) -> Result<PBox> {
    ensure(!samples.is_empty(), || "KS bounds need at least one sample".into())?;
    ensure(samples.iter().all(|s| s.is_finite()), || "samples must be finite".into())?;
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    let d = ks_critical_value(alpha, n)?;

    let (lo, hi) = match support {
        Some((lo, hi)) => {
            ensure(lo <= xs[0] && xs[n - 1] <= hi && lo < hi, || {
                format!("support [{lo}, {hi}] must contain all samples [{}, {}]", xs[0], xs[n - 1])
            })?;
            (lo, hi)
        }
        None => (f64::NEG_INFINITY, f64::INFINITY),
    };

    let mut grid = vec![lo];
    grid.extend(xs.iter().copied());
    grid.push(hi);
    grid.dedup();

    let ecdf = |x: f64| xs.partition_point(|&s| s <= x) as f64 / n as f64;
    let upper = grid.iter().map(|&x| if x >= hi { 1.0 } else { (ecdf(x) + d).min(1.0) }).collect();
    let lower = grid.iter().map(|&x| if x >= hi { 1.0 } else { (ecdf(x) - d).max(0.0) }).collect();
    PBox::new(grid, lower, upper, BoundKind::Statistical { confidence: 1.0 - alpha })
}
