//! Combining internal loss data, external data and expert opinion for
//! operational risk, and computing the annual-loss value-at-risk.
//!
//! The crate is organised by method:
//!
//! - [`distributions`]: distribution families, the modified Bessel function
//!   of the third kind and the generalised inverse Gaussian (GIG) law.
//! - [`conjugate`]: two-source Bayesian combining (Poisson-gamma,
//!   lognormal-normal), prior elicitation and empirical Bayes.
//! - [`three_source`]: simultaneous combining of internal data, external
//!   data and expert opinion (Poisson-gamma-gamma with GIG posterior,
//!   lognormal-normal-normal).
//! - [`dirichlet`]: Dirichlet-process blending of a scenario distribution
//!   with observed losses.
//! - [`evidence`]: Dempster-Shafer structures, p-boxes and
//!   Kolmogorov-Smirnov bounds.
//! - [`lda`]: compound frequency/severity Monte Carlo, VaR, data
//!   sufficiency and the ad-hoc and minimum-variance combiners.
//! - [`io`]: loss data ingestion, scenario configuration and text formats.
//! - [`cli`]: the `opcombine` command-line front end.
//!
//! Runnable walk-throughs live in the crate's `examples/` directory.

pub mod cli;
pub mod conjugate;
pub mod dirichlet;
pub mod distributions;
pub mod error;
pub mod evidence;
pub mod io;
pub mod lda;
pub mod numeric;
pub mod rng;
pub mod three_source;

pub use error::{Error, Result};
