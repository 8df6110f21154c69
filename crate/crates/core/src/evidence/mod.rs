//! Imprecise evidence: Dempster-Shafer structures on the real line, p-boxes
//! and distribution-free Kolmogorov-Smirnov bands.

mod ds;
mod ks;
mod pbox;

pub use ds::{dempster_combine, CombineOptions, Combination, DempsterShaferStructure, FocalElement};
pub use ks::{ks_bounds, ks_critical_value, KS_TABLE_ALPHAS, KS_TABLE_MAX_N};
pub use pbox::{ds_from_pbox, pbox_envelope, pbox_intersect, plausibility_belief, PBox};

use serde::{Deserialize, Serialize};

/// Whether bounds are certain or hold only at a confidence level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Sure,
    Statistical { confidence: f64 },
}

impl BoundKind {
    pub fn is_statistical(&self) -> bool {
        matches!(self, BoundKind::Statistical { .. })
    }

    /// Kind of a result built from several inputs: statistical at the
    /// lowest input confidence if any input is statistical.
    pub fn weakest(kinds: impl IntoIterator<Item = BoundKind>) -> BoundKind {
        kinds.into_iter().fold(BoundKind::Sure, |acc, k| match (acc, k) {
            (BoundKind::Sure, k) => k,
            (a, BoundKind::Sure) => a,
            (BoundKind::Statistical { confidence: a }, BoundKind::Statistical { confidence: b }) => {
                BoundKind::Statistical { confidence: a.min(b) }
            }
        })
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundKind::Sure => write!(f, "sure"),
            BoundKind::Statistical { confidence } => write!(f, "statistical {confidence}"),
        }
    }
}

impl std::str::FromStr for BoundKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        let mut parts = s.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some("sure"), None, None) => Ok(BoundKind::Sure),
            (Some("statistical"), Some(c), None) => c
                .parse::<f64>()
                .ok()
                .filter(|c| *c > 0.0 && *c < 1.0)
                .map(|confidence| BoundKind::Statistical { confidence })
                .ok_or_else(|| crate::Error::InvalidParameter(format!("bad confidence '{c}'"))),
            _ => Err(crate::Error::InvalidParameter(format!("unknown bound kind '{s}'"))),
        }
    }
}
