//! Blend an expert's scenario curve with observed losses and print the
//! posterior mean with a 90% band for the severity cdf.

use opcombine::dirichlet::{dp_band_curve, dp_posterior, DirichletPrior};
use opcombine::distributions::{Interpolation, StepDistribution};

fn main() -> opcombine::Result<()> {
    let scenario = StepDistribution::new(
        vec![0.0, 10.0, 30.0, 50.0, 120.0, 600.0],
        vec![0.0, 0.1, 0.5, 0.75, 0.9, 1.0],
        Interpolation::Linear,
    )?;
    let prior = DirichletPrior::new(scenario, 10.0)?;
    let losses = [20.0, 30.0, 50.0, 80.0, 120.0, 170.0, 220.0, 280.0];
    let post = dp_posterior(&prior, &losses)?;
    let share = post.scenario_weight() / post.concentration();
    println!("scenario share of the posterior base: {share:.3}");

    let grid: Vec<f64> = (0..=30).map(|i| i as f64 * 20.0).collect();
    let band = dp_band_curve(&post, &grid, 0.05, 0.95)?;
    println!("{:>6} {:>7} {:>7} {:>7}", "x", "lower", "mean", "upper");
    for r in &band.rows {
        println!("{:>6} {:>7.4} {:>7.4} {:>7.4}", r.x, r.lower, r.mean, r.upper);
    }
    Ok(())
}
