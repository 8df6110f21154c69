//! Fit a gamma prior to an expert's interval, then update it year by year.

use opcombine::conjugate::{
    credibility_decomposition, fit_gamma_prior_from_interval, lognormal_normal_posterior, poisson_gamma_trajectory,
    AnnualCounts, ElicitedInterval, LogLossSample,
};
use opcombine::distributions::NormalParams;

fn main() -> opcombine::Result<()> {
    // "about 0.5 events a year, between 0.25 and 0.75 with probability 2/3"
    let prior = fit_gamma_prior_from_interval(&ElicitedInterval::new(0.5, 0.25, 0.75, 2.0 / 3.0)?)?;
    println!("prior: alpha = {:.4}, beta = {:.4}", prior.shape, prior.scale);

    let counts = AnnualCounts::new(vec![0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 2, 1, 1, 2, 0, 2, 0, 1, 0, 0, 1, 0, 1, 1, 0]);
    println!("{:>4} {:>3} {:>8} {:>8} {:>8}", "year", "n", "bayes", "stderr", "mle");
    let mut total = 0;
    for (k, (post, &n)) in poisson_gamma_trajectory(prior, &counts).iter().zip(&counts.counts).enumerate() {
        total += n;
        let mle = total as f64 / (k + 1) as f64;
        println!("{:>4} {:>3} {:>8.4} {:>8.4} {:>8.4}", k + 1, n, post.shape * post.scale, post.stdev(), mle);
    }
    let d = credibility_decomposition(prior, &counts);
    println!("credibility weight on the data after 25 years: {:.3}", d.weight);

    // Severity side: log-losses with known sigma and a normal prior on mu.
    let logs = LogLossSample::new(vec![9.8, 10.4, 11.1, 10.0, 12.3], 1.2)?;
    let mu = lognormal_normal_posterior(NormalParams::new(10.5, 1.0)?, &logs);
    println!("posterior mu: {:.4} +- {:.4}", mu.mean, mu.stdev);
    Ok(())
}
