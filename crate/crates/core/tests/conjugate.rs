mod common;

use std::time::Instant;

use common::grid_moments;
use opcombine::conjugate::{
    credibility_decomposition, fit_gamma_prior_from_interval, fit_prior_empirical_bayes_poisson,
    gamma_prior_from_mean_vco, lognormal_credibility, lognormal_normal_posterior, lognormal_normal_update_step,
    poisson_gamma_posterior, poisson_gamma_trajectory, poisson_gamma_update_step, poisson_predictive,
    transform_prior_density, AnnualCounts, CharacteristicMap, ElicitedInterval, FitWarning, IdentityMap,
    LogLossSample, LognormalFixedSigma, LognormalQuantiles, QuantileDifferencePrior, TransformedPrior,
};
use opcombine::distributions::{ContinuousDistribution, DiscreteDistribution, GammaParams, NormalParams};
use opcombine::rng::seeded;
use opcombine::Error;
use proptest::prelude::*;
use rand_distr::{Distribution, Gamma, Poisson};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn counts_strategy() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..30, 0..20)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn poisson_gamma_matches_grid_posterior(shape in 1.0..10.0_f64, scale in 0.05..2.0_f64, counts in counts_strategy()) {
        let prior = GammaParams::new(shape, scale).unwrap();
        let data = AnnualCounts::new(counts.clone());
        let post = poisson_gamma_posterior(prior, &data);
        let s: u64 = counts.iter().sum();
        let t = counts.len() as f64;
        let a = shape - 1.0 + s as f64;
        let rate = 1.0 / scale + t;
        let hi = post.mean() + 40.0 * post.stdev();
        let (m, v) = grid_moments(|l| a * l.ln() - rate * l, hi * 1e-12, hi, 100_000);
        prop_assert!(rel(post.mean(), m) < 1e-4, "mean {} vs {}", post.mean(), m);
        prop_assert!(rel(post.variance(), v) < 1e-4, "var {} vs {}", post.variance(), v);
    }

    #[test]
    fn lognormal_normal_matches_grid_posterior(
        mu0 in -5.0..15.0_f64,
        sd0 in 0.1..5.0_f64,
        sigma in 0.2..3.0_f64,
        ys in prop::collection::vec(-5.0..20.0_f64, 0..30),
    ) {
        let prior = NormalParams::new(mu0, sd0).unwrap();
        let post = lognormal_normal_posterior(prior, &LogLossSample::new(ys.clone(), sigma).unwrap());
        let log_density = |mu: f64| {
            -0.5 * ((mu - mu0) / sd0).powi(2) - ys.iter().map(|y| 0.5 * ((y - mu) / sigma).powi(2)).sum::<f64>()
        };
        let (lo, hi) = (post.mean - 30.0 * post.stdev, post.mean + 30.0 * post.stdev);
        let (m, v) = grid_moments(log_density, lo, hi, 100_000);
        prop_assert!((post.mean - m).abs() < 1e-4 * post.mean.abs().max(post.stdev));
        prop_assert!(rel(post.variance(), v) < 1e-4);
    }
}

proptest! {
    #[test]
    fn recursion_equals_batch(shape in 0.1..10.0_f64, scale in 0.01..5.0_f64, counts in counts_strategy()) {
        let prior = GammaParams::new(shape, scale).unwrap();
        let data = AnnualCounts::new(counts.clone());
        let mut p = prior;
        for &n in &counts {
            p = poisson_gamma_update_step(p, n);
        }
        prop_assert_eq!(p, poisson_gamma_posterior(prior, &data));
        let traj = poisson_gamma_trajectory(prior, &data);
        prop_assert_eq!(traj.last().copied().unwrap_or(prior), p);
    }

    #[test]
    fn lognormal_recursion_equals_batch(
        mu0 in -5.0..15.0_f64,
        sd0 in 0.1..5.0_f64,
        sigma in 0.2..3.0_f64,
        ys in prop::collection::vec(-5.0..20.0_f64, 0..30),
    ) {
        let prior = NormalParams::new(mu0, sd0).unwrap();
        let batch = lognormal_normal_posterior(prior, &LogLossSample::new(ys.clone(), sigma).unwrap());
        let step = ys.iter().fold(prior, |p, &y| lognormal_normal_update_step(p, y, sigma));
        prop_assert!((step.mean - batch.mean).abs() <= 1e-12 * batch.mean.abs().max(1.0));
        prop_assert!((step.stdev - batch.stdev).abs() <= 1e-12 * batch.stdev);
    }

    #[test]
    fn credibility_decompositions(shape in 0.1..10.0_f64, scale in 0.01..5.0_f64, counts in prop::collection::vec(0u64..30, 1..20),
                                  mu0 in -5.0..15.0_f64, sd0 in 0.1..5.0_f64, sigma in 0.2..3.0_f64,
                                  ys in prop::collection::vec(-5.0..20.0_f64, 1..30)) {
        let prior = GammaParams::new(shape, scale).unwrap();
        let data = AnnualCounts::new(counts);
        let d = credibility_decomposition(prior, &data);
        let post = poisson_gamma_posterior(prior, &data);
        prop_assert!((0.0..1.0).contains(&d.weight));
        prop_assert!(rel(d.combined(), post.mean()) < 1e-12);
        let nb = poisson_predictive(post);
        prop_assert!(rel(nb.mean(), post.mean()) < 1e-12);

        let lp = NormalParams::new(mu0, sd0).unwrap();
        let sample = LogLossSample::new(ys, sigma).unwrap();
        let ld = lognormal_credibility(lp, &sample);
        let lpost = lognormal_normal_posterior(lp, &sample);
        prop_assert!((ld.combined() - lpost.mean).abs() < 1e-12 * lpost.mean.abs().max(1.0));
    }

    #[test]
    fn an_extra_year_sharpens_the_posterior(shape in 0.1..10.0_f64, scale in 0.01..5.0_f64, counts in counts_strategy(), extra in 0u64..30,
                                            sd0 in 0.1..5.0_f64, sigma in 0.2..3.0_f64, ys in prop::collection::vec(-5.0..20.0_f64, 0..30), y in -5.0..20.0_f64) {
        let prior = GammaParams::new(shape, scale).unwrap();
        let before = poisson_gamma_posterior(prior, &AnnualCounts::new(counts.clone()));
        let mut more = counts;
        more.push(extra);
        let after = poisson_gamma_posterior(prior, &AnnualCounts::new(more));
        prop_assert!(after.scale < before.scale);

        let lp = NormalParams::new(0.0, sd0).unwrap();
        let b = lognormal_normal_posterior(lp, &LogLossSample::new(ys.clone(), sigma).unwrap());
        let mut ys2 = ys;
        ys2.push(y);
        let a = lognormal_normal_posterior(lp, &LogLossSample::new(ys2, sigma).unwrap());
        prop_assert!(a.stdev < b.stdev);
    }

    #[test]
    fn year_order_is_irrelevant(shape in 0.1..10.0_f64, scale in 0.01..5.0_f64, mut counts in counts_strategy()) {
        // Adding integer counts to a fractional shape rounds differently
        // depending on order, so equality holds to rounding only.
        let prior = GammaParams::new(shape, scale).unwrap();
        let a = poisson_gamma_posterior(prior, &AnnualCounts::new(counts.clone()));
        counts.reverse();
        let b = poisson_gamma_posterior(prior, &AnnualCounts::new(counts));
        prop_assert!(rel(a.shape, b.shape) < 1e-14);
        prop_assert_eq!(a.scale, b.scale);
    }
}

#[test]
fn elicited_prior_worked_example() {
    let start = Instant::now();
    let p = fit_gamma_prior_from_interval(&ElicitedInterval::new(0.5, 0.25, 0.75, 2.0 / 3.0).unwrap()).unwrap();
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert!((p.shape - 3.407).abs() < 0.01, "{}", p.shape);
    assert!((p.scale - 0.147).abs() < 0.001, "{}", p.scale);
    assert!((p.shape * p.scale - 0.5).abs() < 1e-12);
    assert!((p.cdf(0.75) - p.cdf(0.25) - 2.0 / 3.0).abs() < 1e-9);
}

#[test]
fn elicitation_boundaries() {
    // tiny coverage: the prior flattens out (alpha to the lower end)
    let e = fit_gamma_prior_from_interval(&ElicitedInterval::new(0.5, 0.49, 0.51, 1e-9).unwrap()).unwrap_err();
    assert!(matches!(e, Error::BoundaryFit { .. } | Error::UnattainableCoverage { .. }), "{e:?}");
    // near-certain coverage of a narrow interval needs alpha beyond the search range
    let e = fit_gamma_prior_from_interval(&ElicitedInterval::new(0.5, 0.4999, 0.5001, 0.9999).unwrap()).unwrap_err();
    assert!(matches!(e, Error::BoundaryFit { .. } | Error::UnattainableCoverage { .. }), "{e:?}");
}

#[test]
fn vco_route() {
    let p = gamma_prior_from_mean_vco(0.5, 0.5).unwrap();
    assert!((p.shape - 4.0).abs() < 1e-12);
    assert!((p.scale - 0.125).abs() < 1e-12);
    assert!((p.vco() - 0.5).abs() < 1e-12);
}

#[test]
fn credibility_weight_tends_to_one() {
    let prior = GammaParams::new(3.407, 0.147).unwrap();
    let mut prev = 0.0;
    for t in [1usize, 10, 100, 10_000, 1_000_000] {
        let w = credibility_decomposition(prior, &AnnualCounts::new(vec![1; t])).weight;
        assert!(w > prev);
        prev = w;
    }
    assert!(prev > 1.0 - 1e-5);
    let d = credibility_decomposition(prior, &AnnualCounts::default());
    assert_eq!(d.weight, 0.0);
    assert_eq!(d.combined(), prior.mean());
    let d1 = credibility_decomposition(prior, &AnnualCounts::new(vec![0]));
    assert!((d1.weight - 0.147 / 1.147).abs() < 1e-12);
}

#[test]
fn identity_map_gives_product_of_marginals() {
    let g = [GammaParams::new(2.0, 1.5).unwrap(), GammaParams::new(0.7, 3.0).unwrap()];
    let tp = TransformedPrior::with_map(g.to_vec(), IdentityMap(2)).unwrap();
    for theta in [[0.3, 2.0], [1.0, 0.01], [4.0, 7.5]] {
        let want = g[0].pdf(theta[0]) * g[1].pdf(theta[1]);
        assert!(rel(tp.density(&theta).unwrap(), want) < 1e-9);
    }
}

#[test]
fn quantile_ordering_constraint() {
    let qdp = QuantileDifferencePrior::new(
        vec![0.5, 0.9],
        vec![GammaParams::new(2.0, 1.0).unwrap(), GammaParams::new(2.0, 2.0).unwrap()],
    )
    .unwrap();
    let tp = transform_prior_density(&qdp, LognormalQuantiles).unwrap();
    assert!(tp.density(&[0.5, 0.8]).unwrap() > 0.0);
    assert_eq!(tp.density(&[0.5, -0.8]).unwrap(), 0.0);
    assert_eq!(tp.density(&[0.5, 0.0]).unwrap(), 0.0);
}

struct Collapsed;

impl CharacteristicMap for Collapsed {
    fn dim(&self) -> usize {
        2
    }

    fn characteristics(&self, theta: &[f64]) -> Option<Vec<f64>> {
        Some(vec![theta[0] + theta[1], 2.0 * (theta[0] + theta[1])])
    }
}

#[test]
fn singular_jacobian_is_an_error() {
    let g = GammaParams::new(2.0, 1.0).unwrap();
    let tp = TransformedPrior::with_map(vec![g, g], Collapsed).unwrap();
    assert!(matches!(tp.density(&[1.0, 1.0]), Err(Error::SingularJacobian(_))));
}

/// Push a gamma prior on the 0.9 quantile through `mu = ln q - sigma z` by
/// simulation and compare the histogram with the transformed density.
#[test]
fn transformed_density_matches_push_forward() {
    let sigma = 1.3;
    let level = 0.9;
    let gq = GammaParams::new(3.0, 2.0).unwrap();
    let qdp = QuantileDifferencePrior::new(vec![level], vec![gq]).unwrap();
    let tp = transform_prior_density(&qdp, LognormalFixedSigma { sigma }).unwrap();
    let z = NormalParams::standard().quantile(level).unwrap();

    let mut rng = seeded(20_240_601);
    let draw = Gamma::new(gq.shape, gq.scale).unwrap();
    let n = 1_000_000;
    let (lo, hi, bins) = (-2.5, 2.5, 50);
    let width = (hi - lo) / bins as f64;
    let mut hist = vec![0u64; bins];
    for _ in 0..n {
        let mu = draw.sample(&mut rng).ln() - sigma * z;
        if mu >= lo && mu < hi {
            hist[((mu - lo) / width) as usize] += 1;
        }
    }
    for (i, &c) in hist.iter().enumerate() {
        let center = lo + (i as f64 + 0.5) * width;
        // bin probability by Simpson over the bin
        let p = common::simpson(|m| tp.density(&[m]).unwrap(), center - width / 2.0, center + width / 2.0, 40);
        let expected = p * n as f64;
        let sd = (expected * (1.0 - p)).sqrt().max(1.0);
        assert!((c as f64 - expected).abs() < 5.0 * sd, "bin {center}: {c} vs {expected}");
    }
}

fn simulate_cells(seed: u64, n_cells: usize, years: usize) -> Vec<AnnualCounts> {
    let mut rng = seeded(seed);
    let lambda = Gamma::new(4.0, 0.25).unwrap();
    (0..n_cells)
        .map(|_| {
            let l: f64 = lambda.sample(&mut rng);
            let pois = Poisson::new(l).unwrap();
            AnnualCounts::new((0..years).map(|_| pois.sample(&mut rng) as u64).collect())
        })
        .collect()
}

#[test]
fn empirical_bayes_fit_is_a_stationary_point() {
    let fit = fit_prior_empirical_bayes_poisson(&simulate_cells(7, 50, 20)).unwrap();
    assert!(fit.warnings.is_empty(), "{:?}", fit.warnings);
    assert!(fit.gradient[0].abs() < 1e-6 && fit.gradient[1].abs() < 1e-4, "{:?}", fit.gradient);
    assert!(rel(fit.prior.mean(), 1.0) < 0.15, "{:?}", fit.prior);
}

/// With 50 cells of 20 years the shape estimate has a sampling spread of
/// roughly +-30%, so a single draw cannot be held to 15%. Check instead
/// that the estimator is centred on the truth over many draws.
#[test]
fn empirical_bayes_is_centred_on_the_truth() {
    let mut a_err = Vec::new();
    let mut b_err = Vec::new();
    for seed in 0..100 {
        let fit = fit_prior_empirical_bayes_poisson(&simulate_cells(seed, 50, 20)).unwrap();
        a_err.push(fit.prior.shape / 4.0 - 1.0);
        b_err.push(fit.prior.scale / 0.25 - 1.0);
    }
    a_err.sort_by(f64::total_cmp);
    b_err.sort_by(f64::total_cmp);
    let median = |v: &[f64]| 0.5 * (v[49] + v[50]);
    assert!(median(&a_err).abs() < 0.1, "shape median error {}", median(&a_err));
    assert!(median(&b_err).abs() < 0.1, "scale median error {}", median(&b_err));
    // more data per cell shrinks the error
    let big = fit_prior_empirical_bayes_poisson(&simulate_cells(7, 2000, 20)).unwrap();
    assert!(rel(big.prior.shape, 4.0) < 0.15 && rel(big.prior.scale, 0.25) < 0.15, "{:?}", big.prior);
}

#[test]
fn empirical_bayes_degenerate_inputs() {
    let zeros: Vec<AnnualCounts> = (0..5).map(|_| AnnualCounts::new(vec![0])).collect();
    let fit = fit_prior_empirical_bayes_poisson(&zeros).unwrap();
    assert!(fit.warnings.iter().any(|w| matches!(w, FitWarning::Boundary { .. })));

    let flat = vec![AnnualCounts::new(vec![1, 1, 1]), AnnualCounts::new(vec![1, 1, 1])];
    let fit = fit_prior_empirical_bayes_poisson(&flat).unwrap();
    assert!(fit.warnings.contains(&FitWarning::NonIdentifiable));
}
