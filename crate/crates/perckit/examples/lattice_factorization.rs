//! The factorization ratio P4²/(P3·P3·P2) from ε-neighborhood
//! probabilities on the lattice, against the universal constant KF.
//! Scaled-down version of `perckit perc factorize --l 512`.
//!
//! This is a conjecture-level check: the continuum statements are exact,
//! the lattice counterpart holds in the ε → 0, L → ∞ limit only.
//!
//! ```bash
//! cargo run --release --example lattice_factorization
//! ```

use perckit::formulas::constants;
use perckit::lattice::{factorization_ratio, FactorizationGeometry, LatticeRegion};

fn main() {
    let l = 256usize;
    let region = LatticeRegion::new(l, 4 * l / 5).unwrap();
    let kf = constants().kf;
    println!("KF = {kf:.6}");
    for (name, geom) in [
        ("centered  ", FactorizationGeometry::centered()),
        ("off-center", FactorizationGeometry::off_center()),
    ] {
        let est = factorization_ratio(&geom, &region, 1.0 / 32.0, 8000, 7).unwrap();
        let ps: Vec<f64> = est.components.iter().map(|e| e.p_hat).collect();
        match est.ratio {
            Some((ratio, err)) => println!(
                "{name}: ratio {ratio:.4} ± {err:.4}  (|ratio/KF - 1| = {:.1}%)   p = {:?}",
                100.0 * (ratio / kf - 1.0).abs(),
                ps.iter().map(|p| (p * 1000.0).round() / 1000.0).collect::<Vec<_>>()
            ),
            None => println!("{name}: censored (a component had zero hits)"),
        }
    }
}
