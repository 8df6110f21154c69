use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{FrequencySampler, RiskCellModel, SeveritySampler, SimulationMode};
use crate::error::{ensure, Result};
use crate::numeric::KahanSum;
use crate::rng::StreamFactory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n_sims: usize,
    pub seed: u64,
    pub mode: SimulationMode,
    /// Number of parallel work partitions. Results do not depend on it.
    pub streams: usize,
}

impl SimulationConfig {
    pub fn new(n_sims: usize, seed: u64, mode: SimulationMode) -> Self {
        Self { n_sims, seed, mode, streams: rayon::current_num_threads().max(1) }
    }

    pub fn with_streams(mut self, streams: usize) -> Self {
        self.streams = streams;
        self
    }
}

/// Simulated annual losses, one entry per replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnualLossSample {
    pub total: Vec<f64>,
    /// `per_cell[j][i]` is cell `j`'s loss in replicate `i`.
    pub per_cell: Vec<Vec<f64>>,
}

impl AnnualLossSample {
    pub fn len(&self) -> usize {
        self.total.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total.is_empty()
    }
}

/// Sample mean with compensated summation in replicate order.
pub fn sample_mean(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<KahanSum>().value() / xs.len() as f64
}

/// Draws `n_sims` years of `Z = sum_j sum_{i <= N_j} X_i^(j)`.
///
/// Replicate `i` uses random stream `i` of the seed, so the output is the
/// same for any number of partitions.
pub fn simulate_annual_loss(cells: &[RiskCellModel], config: &SimulationConfig) -> Result<AnnualLossSample> {
    ensure(config.n_sims >= 1, || "need at least one replicate".into())?;
    ensure(!cells.is_empty(), || "need at least one risk cell".into())?;
    let freq: Vec<FrequencySampler> = cells
        .iter()
        .map(|c| FrequencySampler::new(&c.frequency, config.mode))
        .collect::<Result<_>>()?;
    let sev: Vec<SeveritySampler> = cells
        .iter()
        .map(|c| SeveritySampler::new(&c.severity, config.mode))
        .collect::<Result<_>>()?;

    let k = cells.len();
    let factory = StreamFactory::new(config.seed);
    let mut rows = vec![0.0; config.n_sims * k];
    let per_part = config.n_sims.div_ceil(config.streams.max(1));

    rows.par_chunks_mut(per_part * k).enumerate().for_each(|(part, chunk)| {
        let first = part * per_part;
        for (offset, row) in chunk.chunks_mut(k).enumerate() {
            let mut rng = factory.stream((first + offset) as u64);
            for (j, out) in row.iter_mut().enumerate() {
                let year = sev[j].for_year(&mut rng);
                let n = freq[j].sample(&mut rng);
                let mut loss = KahanSum::new();
                for _ in 0..n {
                    loss.add(year.sample(&mut rng));
                }
                *out = loss.value();
            }
        }
    });

    let per_cell: Vec<Vec<f64>> = (0..k).map(|j| rows.iter().skip(j).step_by(k).copied().collect()).collect();
    let total = rows.chunks(k).map(|r| r.iter().copied().collect::<KahanSum>().value()).collect();
    Ok(AnnualLossSample { total, per_cell })
}
