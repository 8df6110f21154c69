mod common;

use common::kolmogorov_critical;
use opcombine::error::Error;
use opcombine::evidence::{
    dempster_combine, ds_from_pbox, ks_bounds, ks_critical_value, pbox_envelope, pbox_intersect, plausibility_belief,
    BoundKind, CombineOptions, DempsterShaferStructure, FocalElement, PBox, KS_TABLE_ALPHAS, KS_TABLE_MAX_N,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const THIRD: f64 = 1.0 / 3.0;

fn structure(intervals: &[(f64, f64)]) -> DempsterShaferStructure {
    let m = 1.0 / intervals.len() as f64;
    DempsterShaferStructure::new(intervals.iter().map(|&(lo, hi)| FocalElement::new(lo, hi, m)).collect()).unwrap()
}

fn a() -> DempsterShaferStructure {
    structure(&[(5.0, 20.0), (10.0, 25.0), (15.0, 30.0)])
}

fn b() -> DempsterShaferStructure {
    structure(&[(10.0, 25.0), (15.0, 30.0), (22.0, 35.0)])
}

fn combine(x: &DempsterShaferStructure, y: &DempsterShaferStructure) -> (DempsterShaferStructure, f64) {
    let c = dempster_combine(x, y, CombineOptions::default()).unwrap();
    (c.structure, c.conflict)
}

/// Random structure whose elements all contain `pivot` when it is given.
fn random_structure(rng: &mut ChaCha8Rng, pivot: Option<f64>) -> DempsterShaferStructure {
    let k = rng.random_range(1..6);
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let elements = raw
        .iter()
        .map(|&w| {
            let (lo, hi) = match pivot {
                Some(p) => (p - rng.random_range(0.0..5.0), p + rng.random_range(0.0..5.0)),
                None => {
                    let lo = rng.random_range(0.0..10.0);
                    (lo, lo + rng.random_range(0.0..10.0))
                }
            };
            FocalElement::new(lo, hi, w / total)
        })
        .collect();
    DempsterShaferStructure::new(elements).unwrap()
}

fn same_structure(x: &DempsterShaferStructure, y: &DempsterShaferStructure, tol: f64) -> bool {
    x.elements().len() == y.elements().len()
        && x.elements().iter().zip(y.elements()).all(|(e, f)| e.lo == f.lo && e.hi == f.hi && (e.mass - f.mass).abs() <= tol)
}

#[test]
fn worked_combination() {
    let (c, k) = combine(&a(), &b());
    assert!((k - 1.0 / 9.0).abs() < 1e-15);
    assert!((c.total_mass() - 1.0).abs() < 1e-12);
    let els = c.elements();
    assert_eq!(els.len(), 7);
    let quarter = els.iter().find(|e| (e.lo, e.hi) == (15.0, 25.0)).unwrap();
    assert!((quarter.mass - 0.25).abs() < 1e-15);
    let eighths: Vec<(f64, f64)> = els.iter().filter(|e| (e.mass - 0.125).abs() < 1e-15).map(|e| (e.lo, e.hi)).collect();
    assert_eq!(eighths, [(10.0, 20.0), (10.0, 25.0), (15.0, 20.0), (15.0, 30.0), (22.0, 25.0), (22.0, 30.0)]);
}

#[test]
fn vacuous_structure_is_neutral() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let v = DempsterShaferStructure::vacuous(-1e9, 1e9).unwrap();
    for _ in 0..50 {
        let x = random_structure(&mut rng, None);
        let (c, k) = combine(&x, &v);
        assert_eq!(k, 0.0);
        assert!(same_structure(&c, &x, 1e-15));
    }
}

#[test]
fn total_conflict_is_an_error() {
    let r = dempster_combine(&structure(&[(0.0, 1.0)]), &structure(&[(2.0, 3.0)]), CombineOptions::default());
    assert!(matches!(r, Err(Error::TotalConflict)));
}

#[test]
fn mixed_kinds_need_acknowledgment() {
    let p = ks_bounds(&[1.0, 2.0, 3.0, 4.0], 0.2, Some((0.0, 5.0))).unwrap();
    let stat = ds_from_pbox(&p, 4).unwrap();
    assert!(stat.kind().is_statistical());
    let sure = DempsterShaferStructure::vacuous(0.0, 5.0).unwrap();
    assert!(matches!(dempster_combine(&stat, &sure, CombineOptions::default()), Err(Error::MixedBoundKinds)));
    let c = dempster_combine(&stat, &sure, CombineOptions { acknowledge_mixed_kinds: true }).unwrap();
    assert_eq!(c.structure.kind(), BoundKind::Statistical { confidence: 0.8 });
}

#[test]
fn invalid_structures_are_rejected() {
    assert!(DempsterShaferStructure::new(vec![]).is_err());
    assert!(DempsterShaferStructure::new(vec![FocalElement::new(2.0, 1.0, 1.0)]).is_err());
    assert!(DempsterShaferStructure::new(vec![FocalElement::new(1.0, 2.0, 0.9)]).is_err());
    assert!(DempsterShaferStructure::new(vec![FocalElement::new(1.0, f64::INFINITY, 1.0)]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn combination_is_commutative(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_structure(&mut rng, Some(5.0));
        let y = random_structure(&mut rng, None);
        match (dempster_combine(&x, &y, CombineOptions::default()), dempster_combine(&y, &x, CombineOptions::default())) {
            (Ok(p), Ok(q)) => {
                prop_assert_eq!(&p.structure, &q.structure);
                prop_assert_eq!(p.conflict, q.conflict);
                prop_assert!((p.structure.total_mass() - 1.0).abs() < 1e-12);
            }
            (Err(Error::TotalConflict), Err(Error::TotalConflict)) => {}
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn combination_is_associative(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (
            random_structure(&mut rng, Some(5.0)),
            random_structure(&mut rng, Some(5.0)),
            random_structure(&mut rng, Some(5.0)),
        );
        let left = combine(&combine(&x, &y).0, &z).0;
        let right = combine(&x, &combine(&y, &z).0).0;
        prop_assert!(same_structure(&left, &right, 1e-12), "{:?} vs {:?}", left, right);
        prop_assert!((left.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn belief_never_exceeds_plausibility(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_structure(&mut rng, None);
        for _ in 0..100 {
            let lo = rng.random_range(-2.0..22.0);
            let hi = lo + rng.random_range(0.0..10.0);
            prop_assert!(x.belief(lo, hi) <= x.plausibility(lo, hi));
        }
        prop_assert!((x.belief(-1e9, 1e9) - 1.0).abs() < 1e-12);
        prop_assert_eq!(x.plausibility(1.0, 0.0), 0.0);
        let p = plausibility_belief(&x);
        for &g in p.grid() {
            prop_assert!(p.lower_at(g) <= p.upper_at(g));
        }
    }

    #[test]
    fn envelope_contains_inputs_and_intersection(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let boxes: Vec<PBox> = (0..3).map(|_| plausibility_belief(&random_structure(&mut rng, Some(5.0)))).collect();
        let env = pbox_envelope(&boxes).unwrap();
        for b in &boxes {
            prop_assert!(env.contains(b, 0.0));
        }
        if let Ok(i) = pbox_intersect(&boxes) {
            prop_assert!(env.contains(&i, 0.0));
            for b in &boxes {
                prop_assert!(b.contains(&i, 0.0));
            }
        }
    }
}

#[test]
fn intersect_and_envelope_examples() {
    let x = PBox::interval(1.0, 3.0).unwrap();
    let y = PBox::interval(2.0, 4.0).unwrap();
    assert_eq!(pbox_intersect(&[x.clone(), x.clone()]).unwrap(), x);
    assert_eq!(pbox_envelope(&[x.clone(), x.clone()]).unwrap(), x);

    let both = pbox_intersect(&[x, y]).unwrap();
    let expected = PBox::interval(2.0, 3.0).unwrap();
    for t in [0.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0] {
        assert_eq!(both.lower_at(t), expected.lower_at(t), "F^L({t})");
        assert_eq!(both.upper_at(t), expected.upper_at(t), "F^U({t})");
    }

    let env = pbox_envelope(&[PBox::interval(1.0, 1.0).unwrap(), PBox::interval(2.0, 2.0).unwrap()]).unwrap();
    let span = PBox::interval(1.0, 2.0).unwrap();
    for t in [0.5, 1.0, 1.5, 2.0, 2.5] {
        assert_eq!(env.lower_at(t), span.lower_at(t));
        assert_eq!(env.upper_at(t), span.upper_at(t));
    }

    let far = PBox::interval(5.0, 6.0).unwrap();
    match pbox_intersect(&[PBox::interval(1.0, 3.0).unwrap(), far]) {
        Err(Error::InconsistentBoxes { x }) => assert_eq!(x, 3.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn discretization_round_trip() {
    let back = ds_from_pbox(&plausibility_belief(&a()), 3).unwrap();
    assert!(same_structure(&back, &a(), 1e-15), "{back:?}");

    let point = ds_from_pbox(&PBox::interval(2.0, 2.0).unwrap(), 1).unwrap();
    assert_eq!(point.elements(), &[FocalElement::new(2.0, 2.0, 1.0)]);
    let single = ds_from_pbox(&PBox::interval(1.0, 4.0).unwrap(), 1).unwrap();
    assert_eq!(single.elements(), &[FocalElement::new(1.0, 4.0, 1.0)]);
}

#[test]
fn refined_discretization_encloses_within_a_slice() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let samples: Vec<f64> = (0..37).map(|_| rng.random::<f64>()).collect();
    let p = ks_bounds(&samples, 0.2, Some((0.0, 1.0))).unwrap();
    let ds = ds_from_pbox(&p, 100).unwrap();
    assert!((ds.total_mass() - 1.0).abs() < 1e-12);
    let q = plausibility_belief(&ds);
    assert!(q.contains(&p, 1e-12));
    let mut grid: Vec<f64> = p.grid().iter().chain(q.grid()).copied().collect();
    grid.sort_by(f64::total_cmp);
    let gap = grid
        .iter()
        .map(|&x| (q.upper_at(x) - p.upper_at(x)).abs().max((q.lower_at(x) - p.lower_at(x)).abs()))
        .fold(0.0, f64::max);
    assert!(gap < 0.01, "{gap}");

    let unbounded = ks_bounds(&samples, 0.2, None).unwrap();
    assert!(matches!(ds_from_pbox(&unbounded, 10), Err(Error::UnboundedSupport(_))));
}

#[test]
fn ks_table_matches_exact_distribution() {
    assert_eq!(ks_critical_value(0.05, 10).unwrap(), 0.40925);
    for &alpha in &KS_TABLE_ALPHAS {
        for n in 1..=KS_TABLE_MAX_N {
            let exact = kolmogorov_critical(n, alpha);
            let table = ks_critical_value(alpha, n).unwrap();
            assert!((table - exact).abs() <= 5.0e-6 + 1e-9, "alpha={alpha} n={n}: {table} vs {exact}");
        }
    }
    let d = ks_critical_value(0.05, 10_000).unwrap();
    assert!((d - 0.0136).abs() < 5e-5);
    assert!(ks_critical_value(0.0, 10).is_err() && ks_critical_value(0.05, 0).is_err());
}

/// Whether the continuous cdf `x` on `[0, 1]` stays inside the step band.
fn covers_uniform(p: &PBox) -> bool {
    let g = p.grid();
    g.windows(2).all(|w| p.lower_at(w[0]) <= w[0] && p.upper_at(w[0]) >= w[1])
}

#[test]
fn ks_band_coverage() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let trials = 10_000;
    let hits = (0..trials)
        .filter(|_| {
            let s: Vec<f64> = (0..10).map(|_| rng.random::<f64>()).collect();
            covers_uniform(&ks_bounds(&s, 0.05, Some((0.0, 1.0))).unwrap())
        })
        .count();
    let rate = hits as f64 / trials as f64;
    assert!(rate >= 0.94, "coverage {rate}");
}

#[test]
fn ks_worked_bands() {
    let data = [3.5, 4.0, 6.0, 8.1, 9.2, 12.3, 14.8, 16.9, 18.0, 20.0];
    let p = ks_bounds(&data, 0.2, Some((0.0, 30.0))).unwrap();
    let d = 0.32257;
    assert_eq!(p.kind(), BoundKind::Statistical { confidence: 0.8 });
    assert_eq!(p.upper_at(-0.1), 0.0);
    assert_eq!(p.upper_at(0.0), d);
    assert_eq!(p.lower_at(0.0), 0.0);
    for (i, &x) in data.iter().enumerate() {
        let f = (i + 1) as f64 / 10.0;
        for t in [x, x + 0.05] {
            assert!((p.upper_at(t) - (f + d).min(1.0)).abs() < 1e-15, "F^U({t})");
            assert!((p.lower_at(t) - (f - d).max(0.0)).abs() < 1e-15, "F^L({t})");
        }
    }
    assert_eq!(p.lower_at(29.9), 1.0 - d);
    assert_eq!(p.lower_at(30.0), 1.0);
    assert_eq!(p.upper_at(30.0), 1.0);
}

#[test]
fn structure_a_bounds() {
    let p = plausibility_belief(&a());
    for (x, up, low) in [(4.9, 0.0, 0.0), (5.0, 1.0, 0.0), (10.0, 2.0, 0.0), (15.0, 3.0, 0.0), (20.0, 3.0, 1.0), (25.0, 3.0, 2.0), (30.0, 3.0, 3.0)] {
        assert!((p.upper_at(x) - up * THIRD).abs() < 1e-15);
        assert!((p.lower_at(x) - low * THIRD).abs() < 1e-15);
    }
}
