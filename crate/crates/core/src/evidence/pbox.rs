use serde::{Deserialize, Serialize};

use super::ds::{DempsterShaferStructure, FocalElement};
use super::BoundKind;
use crate::distributions::{Interpolation, StepDistribution};
use crate::error::{ensure, Error, Result};
use crate::numeric::order_independent_sum;

/// Lower and upper distribution functions on a shared grid of jump points.
/// Both are right-continuous step functions, zero left of the first grid
/// point. Grid points may be infinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PBox {
    lower: StepDistribution,
    upper: StepDistribution,
    kind: BoundKind,
}

impl PBox {
    pub fn new(grid: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>, kind: BoundKind) -> Result<Self> {
        ensure(grid.len() == lower.len() && grid.len() == upper.len(), || {
            "grid, lower and upper must have equal length".into()
        })?;
        if let Some(i) = (0..grid.len()).find(|&i| lower[i] > upper[i]) {
            return Err(Error::InconsistentBoxes { x: grid[i] });
        }
        Ok(Self {
            lower: StepDistribution::new_bound(grid.clone(), lower, Interpolation::Step)?,
            upper: StepDistribution::new_bound(grid, upper, Interpolation::Step)?,
            kind,
        })
    }

    /// All distributions with support inside `[a, b]`.
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        ensure(a <= b, || format!("interval [{a}, {b}] has a > b"))?;
        if a == b {
            return Self::new(vec![a], vec![1.0], vec![1.0], BoundKind::Sure);
        }
        Self::new(vec![a, b], vec![0.0, 1.0], vec![1.0, 1.0], BoundKind::Sure)
    }

    pub fn grid(&self) -> &[f64] {
        self.lower.knots()
    }

    pub fn lower(&self) -> &StepDistribution {
        &self.lower
    }

    pub fn upper(&self) -> &StepDistribution {
        &self.upper
    }

    pub fn lower_values(&self) -> &[f64] {
        self.lower.values()
    }

    pub fn upper_values(&self) -> &[f64] {
        self.upper.values()
    }

    pub fn kind(&self) -> BoundKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: BoundKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn lower_at(&self, x: f64) -> f64 {
        self.lower.eval(x)
    }

    pub fn upper_at(&self, x: f64) -> f64 {
        self.upper.eval(x)
    }

    /// Whether `other` lies inside this box at every grid point of both.
    pub fn contains(&self, other: &PBox, tol: f64) -> bool {
        union_grid([self, other]).iter().all(|&x| {
            self.lower_at(x) <= other.lower_at(x) + tol && other.upper_at(x) <= self.upper_at(x) + tol
        })
    }
}

fn union_grid<'a>(boxes: impl IntoIterator<Item = &'a PBox>) -> Vec<f64> {
    let mut grid: Vec<f64> = boxes.into_iter().flat_map(|b| b.grid().iter().copied()).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Cumulative plausibility `F^U(z) = sum_{x_i <= z} p_i` and belief
/// `F^L(z) = sum_{y_i <= z} p_i`.
pub fn plausibility_belief(ds: &DempsterShaferStructure) -> PBox {
    let els = ds.elements();
    let mut grid: Vec<f64> = els.iter().flat_map(|e| [e.lo, e.hi]).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let cum = |pick: fn(&FocalElement) -> f64, z: f64| {
        let m: Vec<f64> = els.iter().filter(|e| pick(e) <= z).map(|e| e.mass).collect();
        order_independent_sum(&m).min(1.0)
    };
    let upper: Vec<f64> = grid.iter().map(|&z| cum(|e| e.lo, z)).collect();
    let lower: Vec<f64> = grid.iter().map(|&z| cum(|e| e.hi, z)).collect();
    PBox::new(grid, lower, upper, ds.kind()).expect("belief never exceeds plausibility")
}

/// Region all boxes agree on: `F^U = min`, `F^L = max`, evaluated on the
/// union of jump points.
pub fn pbox_intersect(boxes: &[PBox]) -> Result<PBox> {
    ensure(!boxes.is_empty(), || "intersection needs at least one p-box".into())?;
    let grid = union_grid(boxes);
    let lower: Vec<f64> = grid
        .iter()
        .map(|&x| boxes.iter().map(|b| b.lower_at(x)).fold(0.0, f64::max))
        .collect();
    let upper: Vec<f64> = grid
        .iter()
        .map(|&x| boxes.iter().map(|b| b.upper_at(x)).fold(1.0, f64::min))
        .collect();
    PBox::new(grid, lower, upper, BoundKind::weakest(boxes.iter().map(|b| b.kind)))
}

/// Envelope of all boxes: `F^U = max`, `F^L = min`.
pub fn pbox_envelope(boxes: &[PBox]) -> Result<PBox> {
    ensure(!boxes.is_empty(), || "envelope needs at least one p-box".into())?;
    let grid = union_grid(boxes);
    let lower: Vec<f64> = grid
        .iter()
        .map(|&x| boxes.iter().map(|b| b.lower_at(x)).fold(1.0, f64::min))
        .collect();
    let upper: Vec<f64> = grid
        .iter()
        .map(|&x| boxes.iter().map(|b| b.upper_at(x)).fold(0.0, f64::max))
        .collect();
    PBox::new(grid, lower, upper, BoundKind::weakest(boxes.iter().map(|b| b.kind)))
}

/// Canonical discretization into `n_slices` focal elements of mass `1/n`:
/// element `i` is `[F^U^-1((i-1)/n), F^L^-1(i/n)]`.
pub fn ds_from_pbox(p: &PBox, n_slices: usize) -> Result<DempsterShaferStructure> {
    ensure(n_slices >= 1, || "need at least one slice".into())?;
    let n = n_slices as f64;
    let mass = 1.0 / n;
    let mut elements = Vec::with_capacity(n_slices);
    for i in 1..=n_slices {
        let lo = p.upper.inverse_above((i - 1) as f64 / n);
        let hi = p.lower.inverse_at_least(i as f64 / n);
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::UnboundedSupport(format!(
                "slice {i} of {n_slices} reaches [{lo}, {hi}]; declare support bounds"
            )));
        }
        elements.push(FocalElement::new(lo, hi, mass));
    }
    DempsterShaferStructure::with_kind(elements, p.kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    const THIRD: f64 = 1.0 / 3.0;

    fn structure_a() -> DempsterShaferStructure {
        DempsterShaferStructure::new(vec![
            FocalElement::new(5.0, 20.0, THIRD),
            FocalElement::new(10.0, 25.0, THIRD),
            FocalElement::new(15.0, 30.0, THIRD),
        ])
        .unwrap()
    }

    #[test]
    fn structure_a_bounds() {
        let p = plausibility_belief(&structure_a());
        assert_eq!(p.grid(), &[5.0, 10.0, 15.0, 20.0, 25.0, 30.0]);
        for (x, fu, fl) in [(5.0, 1.0, 0.0), (10.0, 2.0, 0.0), (15.0, 3.0, 0.0), (20.0, 3.0, 1.0), (25.0, 3.0, 2.0), (30.0, 3.0, 3.0)] {
            assert!((p.upper_at(x) - fu / 3.0).abs() < 1e-15, "F^U({x})");
            assert!((p.lower_at(x) - fl / 3.0).abs() < 1e-15, "F^L({x})");
        }
        assert_eq!(p.upper_at(4.999), 0.0);
    }

    #[test]
    fn point_mass_bounds_coincide() {
        let p = plausibility_belief(&DempsterShaferStructure::vacuous(2.0, 2.0).unwrap());
        assert_eq!(p.lower(), p.upper());
        assert_eq!(p.lower_at(1.9), 0.0);
        assert_eq!(p.lower_at(2.0), 1.0);
    }

    #[test]
    fn certainty_intervals() {
        let x = PBox::interval(1.0, 3.0).unwrap();
        let y = PBox::interval(2.0, 4.0).unwrap();
        let i = pbox_intersect(&[x.clone(), y.clone()]).unwrap();
        let d = ds_from_pbox(&i, 1).unwrap();
        assert_eq!(d.elements(), &[FocalElement::new(2.0, 3.0, 1.0)]);

        let e = pbox_envelope(&[PBox::interval(1.0, 1.0).unwrap(), PBox::interval(2.0, 2.0).unwrap()]).unwrap();
        assert_eq!(ds_from_pbox(&e, 1).unwrap().elements(), &[FocalElement::new(1.0, 2.0, 1.0)]);

        assert_eq!(
            pbox_intersect(&[PBox::interval(0.0, 1.0).unwrap(), PBox::interval(2.0, 3.0).unwrap()]),
            Err(Error::InconsistentBoxes { x: 1.0 })
        );
    }

    #[test]
    fn idempotent_aggregation() {
        let p = plausibility_belief(&structure_a());
        assert_eq!(pbox_intersect(&[p.clone(), p.clone()]).unwrap(), p);
        assert_eq!(pbox_envelope(&[p.clone(), p.clone()]).unwrap(), p);
    }

    #[test]
    fn round_trip_recovers_structure() {
        let a = structure_a();
        assert_eq!(ds_from_pbox(&plausibility_belief(&a), 3).unwrap(), a);
    }

    #[test]
    fn unbounded_box_cannot_be_discretized() {
        let p = PBox::new(vec![f64::NEG_INFINITY, 0.0], vec![0.0, 1.0], vec![0.5, 1.0], BoundKind::Sure).unwrap();
        assert!(matches!(ds_from_pbox(&p, 2), Err(Error::UnboundedSupport(_))));
    }
}
