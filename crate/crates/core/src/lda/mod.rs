//! Loss distribution approach: the annual loss of each risk cell is a
//! compound sum `Z = X_1 + ... + X_N`, and capital is read off the 0.999
//! quantile of its simulated distribution.
//!
//! Also home to the simpler combiners (fixed-weight mixing, the
//! minimum-variance combination of independent unbiased estimates), the
//! data-sufficiency calculator and the two regulatory formula approaches.

mod combine;
mod model;
mod report;
mod simulate;
mod var;

pub use combine::{
    adhoc_intensity_mix, adhoc_severity_mixture, basic_indicator_capital, min_variance_combine,
    standardised_capital, CombinedEstimate, Estimate, Source, BASIC_INDICATOR_ALPHA, STANDARDISED_BETAS,
};
pub use model::{FrequencyModel, RiskCellModel, SeverityModel, SimulationMode};
pub use report::{capital_from_sample, compute_capital, AggregationMode, CapitalReport, CellVar};
pub use simulate::{sample_mean, simulate_annual_loss, AnnualLossSample, SimulationConfig};
pub use var::{
    data_sufficiency, data_sufficiency_exact, histogram, single_loss_quantile_level, sufficiency_epsilon,
    var_quantile, var_quantile_sorted, HistogramBin, VarEstimate,
};
