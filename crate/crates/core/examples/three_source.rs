//! Combine a prior, internal counts and expert opinions on the intensity,
//! and prior, internal losses and experts on the severity location.

use opcombine::conjugate::{AnnualCounts, LogLossSample};
use opcombine::distributions::{gig_mean, GammaParams, NormalParams, PhiZero};
use opcombine::three_source::{gig_trajectory, lnn_posterior, ExpertIntensityOpinions, FrequencyEvidence, SeverityEvidence};

fn main() -> opcombine::Result<()> {
    let prior = GammaParams::new(3.407, 0.147)?;
    let counts = AnnualCounts::new(vec![0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 2, 1, 1, 2, 0, 2, 0, 1, 0, 0, 1, 0, 1, 1, 0]);
    let experts = ExpertIntensityOpinions::new(vec![0.7], 4.0)?;
    let ev = FrequencyEvidence::new(prior, counts.clone(), 1.0, Some(experts))?;

    println!("{:>4} {:>3} {:>9} {:>9} {:>9}", "year", "n", "nu", "omega", "mean");
    for (k, p) in gig_trajectory(&ev)?.iter().enumerate() {
        println!("{:>4} {:>3} {:>9.3} {:>9.3} {:>9.4}", k + 1, counts.counts[k], p.nu, p.omega, gig_mean(p, PhiZero::Reject)?);
    }

    let sev = SeverityEvidence::new(
        NormalParams::new(10.0, 1.0)?,
        LogLossSample::new(vec![9.1, 10.7, 11.4, 9.9], 1.5)?,
        vec![10.5, 11.0],
        2.0,
    )?;
    let post = lnn_posterior(&sev);
    println!(
        "mu = {:.4} +- {:.4}; weights prior/internal/experts = {:.3}/{:.3}/{:.3}",
        post.posterior.mean, post.posterior.stdev, post.weights[0], post.weights[1], post.weights[2]
    );
    Ok(())
}
