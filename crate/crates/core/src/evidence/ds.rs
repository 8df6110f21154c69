use serde::{Deserialize, Serialize};

use super::BoundKind;
use crate::error::{ensure, Error, Result};
use crate::numeric::order_independent_sum;

const MASS_TOL: f64 = 1e-12;

/// Closed interval `[lo, hi]` carrying probability mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FocalElement {
    pub lo: f64,
    pub hi: f64,
    pub mass: f64,
}

impl FocalElement {
    pub fn new(lo: f64, hi: f64, mass: f64) -> Self {
        Self { lo, hi, mass }
    }

    fn intersect(&self, other: &FocalElement) -> Option<(f64, f64)> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some((lo, hi))
    }
}

/// Focal intervals with masses summing to one. Elements are kept sorted by
/// `(lo, hi)` with identical intervals merged, so two structures describing
/// the same assignment compare equal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DempsterShaferStructure {
    elements: Vec<FocalElement>,
    kind: BoundKind,
}

fn cmp_interval(a: &(f64, f64), b: &(f64, f64)) -> std::cmp::Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
}

/// Sorts and merges identical intervals; masses of merged intervals are
/// summed in sorted order.
fn canonical(mut parts: Vec<((f64, f64), f64)>) -> Vec<FocalElement> {
    parts.sort_by(|a, b| cmp_interval(&a.0, &b.0).then(a.1.total_cmp(&b.1)));
    let mut out: Vec<FocalElement> = Vec::new();
    let mut i = 0;
    while i < parts.len() {
        let key = parts[i].0;
        let j = parts[i..].iter().position(|p| p.0 != key).map_or(parts.len(), |k| i + k);
        let masses: Vec<f64> = parts[i..j].iter().map(|p| p.1).collect();
        out.push(FocalElement::new(key.0, key.1, order_independent_sum(&masses)));
        i = j;
    }
    out
}

impl DempsterShaferStructure {
    pub fn new(elements: Vec<FocalElement>) -> Result<Self> {
        Self::with_kind(elements, BoundKind::Sure)
    }

    pub fn with_kind(elements: Vec<FocalElement>, kind: BoundKind) -> Result<Self> {
        ensure(!elements.is_empty(), || "structure needs at least one focal element".into())?;
        for e in &elements {
            ensure(e.lo.is_finite() && e.hi.is_finite(), || {
                format!("focal element [{}, {}] must be finite; declare support bounds instead", e.lo, e.hi)
            })?;
            ensure(e.lo <= e.hi, || format!("focal element [{}, {}] has lo > hi", e.lo, e.hi))?;
            ensure(e.mass > 0.0, || format!("focal mass must be > 0, got {}", e.mass))?;
        }
        let total = order_independent_sum(&elements.iter().map(|e| e.mass).collect::<Vec<_>>());
        ensure((total - 1.0).abs() <= MASS_TOL, || format!("masses sum to {total}, expected 1"))?;
        let elements = canonical(elements.iter().map(|e| ((e.lo, e.hi), e.mass)).collect());
        Ok(Self { elements, kind })
    }

    /// The structure `{([lo, hi], 1)}` expressing ignorance within `[lo, hi]`.
    pub fn vacuous(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![FocalElement::new(lo, hi, 1.0)])
    }

    pub fn elements(&self) -> &[FocalElement] {
        &self.elements
    }

    pub fn kind(&self) -> BoundKind {
        self.kind
    }

    pub fn total_mass(&self) -> f64 {
        order_independent_sum(&self.elements.iter().map(|e| e.mass).collect::<Vec<_>>())
    }

    /// Mass of focal elements contained in `[lo, hi]`.
    pub fn belief(&self, lo: f64, hi: f64) -> f64 {
        self.sum_where(|e| lo <= e.lo && e.hi <= hi)
    }

    /// Mass of focal elements meeting `[lo, hi]`; zero for an empty query.
    pub fn plausibility(&self, lo: f64, hi: f64) -> f64 {
        if lo > hi {
            return 0.0;
        }
        self.sum_where(|e| e.lo <= hi && lo <= e.hi)
    }

    fn sum_where(&self, f: impl Fn(&FocalElement) -> bool) -> f64 {
        let m: Vec<f64> = self.elements.iter().filter(|e| f(e)).map(|e| e.mass).collect();
        order_independent_sum(&m).min(1.0)
    }
}

/// Result of Dempster's rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Combination {
    pub structure: DempsterShaferStructure,
    /// Mass `K` that fell on empty intersections.
    pub conflict: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CombineOptions {
    /// Allow combining statistical bounds with sure bounds.
    pub acknowledge_mixed_kinds: bool,
}

/// Dempster's rule: masses of nonempty pairwise intersections, renormalized
/// by `1 - K`.
pub fn dempster_combine(
    a: &DempsterShaferStructure,
    b: &DempsterShaferStructure,
    options: CombineOptions,
) -> Result<Combination> {
    if a.kind.is_statistical() != b.kind.is_statistical() && !options.acknowledge_mixed_kinds {
        return Err(Error::MixedBoundKinds);
    }
    let mut parts = Vec::with_capacity(a.elements.len() * b.elements.len());
    let mut conflicting = Vec::new();
    for ea in &a.elements {
        for eb in &b.elements {
            let m = ea.mass * eb.mass;
            match ea.intersect(eb) {
                Some(iv) => parts.push((iv, m)),
                None => conflicting.push(m),
            }
        }
    }
    if parts.is_empty() {
        return Err(Error::TotalConflict);
    }
    let support = order_independent_sum(&parts.iter().map(|p| p.1).collect::<Vec<_>>());
    let merged = canonical(parts);
    let elements = merged
        .into_iter()
        .map(|e| FocalElement { mass: e.mass / support, ..e })
        .collect();
    Ok(Combination {
        structure: DempsterShaferStructure {
            elements,
            kind: BoundKind::weakest([a.kind, b.kind]),
        },
        conflict: order_independent_sum(&conflicting),
    })
}
