//! Dempster-Shafer combination, belief/plausibility bounds and a
//! distribution-free Kolmogorov-Smirnov band, then their intersection.

use opcombine::evidence::{
    dempster_combine, ds_from_pbox, ks_bounds, pbox_envelope, pbox_intersect, plausibility_belief, CombineOptions,
    DempsterShaferStructure, FocalElement,
};

fn equal_mass(intervals: &[(f64, f64)]) -> opcombine::Result<DempsterShaferStructure> {
    let m = 1.0 / intervals.len() as f64;
    DempsterShaferStructure::new(intervals.iter().map(|&(lo, hi)| FocalElement::new(lo, hi, m)).collect())
}

fn main() -> opcombine::Result<()> {
    let a = equal_mass(&[(5.0, 20.0), (10.0, 25.0), (15.0, 30.0)])?;
    let b = equal_mass(&[(10.0, 25.0), (15.0, 30.0), (22.0, 35.0)])?;
    let c = dempster_combine(&a, &b, CombineOptions::default())?;
    println!("conflict = {:.4}", c.conflict);
    for e in c.structure.elements() {
        println!("  [{}, {}] mass {:.4}", e.lo, e.hi, e.mass);
    }
    println!("Bel([10, 30]) = {:.4}, Pls([10, 30]) = {:.4}", c.structure.belief(10.0, 30.0), c.structure.plausibility(10.0, 30.0));

    let data = [3.5, 4.0, 6.0, 8.1, 9.2, 12.3, 14.8, 16.9, 18.0, 20.0];
    let ks = ks_bounds(&data, 0.2, Some((0.0, 40.0)))?;
    let expert = plausibility_belief(&c.structure);
    match pbox_intersect(&[ks.clone(), expert.clone()]) {
        Ok(both) => {
            println!("{:>5} {:>13} {:>13} {:>13}", "x", "ks", "expert", "both");
            for x in [5.0, 10.0, 15.0, 20.0, 25.0, 30.0] {
                println!(
                    "{x:>5} [{:.3}, {:.3}] [{:.3}, {:.3}] [{:.3}, {:.3}]",
                    ks.lower_at(x), ks.upper_at(x), expert.lower_at(x), expert.upper_at(x), both.lower_at(x), both.upper_at(x)
                );
            }
        }
        Err(e) => {
            println!("the two sources disagree ({e}); falling back to their envelope");
            let env = pbox_envelope(&[ks.clone(), expert])?;
            for x in [5.0, 10.0, 15.0, 20.0, 25.0, 30.0] {
                println!("{x:>5} [{:.3}, {:.3}]", env.lower_at(x), env.upper_at(x));
            }
        }
    }

    let slices = ds_from_pbox(&ks, 5)?;
    println!("KS band as 5 focal elements:");
    for e in slices.elements() {
        println!("  [{:.2}, {:.2}] mass {:.2}", e.lo, e.hi, e.mass);
    }
    Ok(())
}
