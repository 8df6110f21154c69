//! Monte Carlo capital for two risk cells, one with a posterior intensity.

use opcombine::distributions::{GammaParams, LognormalParams};
use opcombine::lda::{
    compute_capital, histogram, simulate_annual_loss, AggregationMode, FrequencyModel, RiskCellModel, SeverityModel,
    SimulationConfig, SimulationMode,
};

fn main() -> opcombine::Result<()> {
    let cells = vec![
        RiskCellModel::new(
            "retail",
            FrequencyModel::Poisson { lambda: 10.0 },
            SeverityModel::Lognormal(LognormalParams::new(0.0, 2.0)?),
        )?,
        RiskCellModel::new(
            "fraud",
            FrequencyModel::PosteriorGamma(GammaParams::new(9.4, 0.06)?),
            SeverityModel::Lognormal(LognormalParams::new(1.0, 1.2)?),
        )?,
    ];
    let config = SimulationConfig::new(1_000_000, 2024, SimulationMode::FullPredictive).with_streams(8);
    for aggregation in [AggregationMode::SingleCell, AggregationMode::SumOfVars] {
        let r = compute_capital(&cells, &config, 0.999, aggregation)?;
        println!("{:?}: VaR {:.1} (mc se {:.1}), unexpected loss {:.1}", aggregation, r.var, r.mc_stderr, r.var_minus_expected_loss());
    }

    let sample = simulate_annual_loss(&cells, &SimulationConfig::new(100_000, 1, SimulationMode::PluginMean))?;
    let mut sorted = sample.total.clone();
    sorted.sort_by(f64::total_cmp);
    let p99 = sorted[sorted.len() * 99 / 100];
    let body: Vec<f64> = sorted.into_iter().filter(|&z| z <= p99).collect();
    println!("annual loss histogram below the 99th percentile:");
    for b in histogram(&body, 12)? {
        println!("  [{:>7.1}, {:>7.1}) {}", b.lo, b.hi, "#".repeat((b.count / 1000) as usize));
    }
    Ok(())
}
