//! How much data a 0.999 quantile needs, and minimum-variance pooling of
//! estimates from different sources.

use opcombine::distributions::LognormalParams;
use opcombine::lda::{
    adhoc_intensity_mix, basic_indicator_capital, data_sufficiency, min_variance_combine, single_loss_quantile_level,
    sufficiency_epsilon, Estimate, Source, BASIC_INDICATOR_ALPHA,
};

fn main() -> opcombine::Result<()> {
    let severity = LognormalParams::new(0.0, 2.0)?;
    for eps in [0.05, 0.1, 0.2] {
        println!("relative error {eps}: {} losses", data_sufficiency(0.999, eps, &severity)?);
    }
    println!("with 1000 losses the error is {:.3}", sufficiency_epsilon(0.999, 1000, &severity)?);
    println!("single-loss level for 10 events a year: {}", single_loss_quantile_level(0.999, 10.0)?);

    let pooled = min_variance_combine(&[
        Estimate::new(0.42, 0.010, Source::Internal)?,
        Estimate::new(0.55, 0.004, Source::External)?,
        Estimate::new(0.60, 0.020, Source::Expert)?,
    ])?;
    println!("pooled intensity {:.4} (variance {:.5}), weights {:?}", pooled.value, pooled.variance, pooled.weights);
    println!("ad hoc 70/30 mix: {:.4}", adhoc_intensity_mix(0.42, 0.55, 0.7)?);
    println!("basic indicator capital: {:.1}", basic_indicator_capital(&[120.0, 95.0, -10.0], BASIC_INDICATOR_ALPHA)?);
    Ok(())
}
