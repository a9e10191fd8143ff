//! The half-plane → strip conformal map behind the five-point formula:
//! round trips through the explicit inverse (cosh(πz)+1)/2, Möbius
//! invariance of the strip image, and harmonic measure.
//!
//! ```bash
//! cargo run --release --example strip_geometry
//! ```

use num_complex::Complex64;
use perckit::conformal::{
    harmonic_measure, mobius_to_normalized, strip_inverse_normalized, strip_map, BoundaryConfig,
    MobiusMap,
};

fn main() {
    // round trip through the explicit inverse
    let z = Complex64::new(0.5, 0.5);
    let w = strip_inverse_normalized(z);
    let cfg = BoundaryConfig::with_infinite_u3(0.0, 1.0, w).unwrap();
    let sp = strip_map(&cfg).unwrap();
    println!("inverse map: psi1^-1(0.5+0.5i) = {w:.6}");
    println!("round trip:  strip image = ({:.12}, {:.12})", sp.x, sp.y);
    println!();

    // Möbius normalization of a finite configuration
    let cfg = BoundaryConfig::new(-0.7, 0.4, 2.1, Complex64::new(1.0, 1.3)).unwrap();
    let m = mobius_to_normalized(&cfg).unwrap();
    println!(
        "(u1,u2,u3) = (-0.7, 0.4, 2.1) maps to ({:.2e}, {:.6}, inf)",
        m.apply_real(-0.7),
        m.apply_real(0.4)
    );
    let sp = strip_map(&cfg).unwrap();
    println!(
        "strip image of w = 1+1.3i: ({:.6}, {:.6}), |psi'(w)| = {:.6}",
        sp.x, sp.y, sp.deriv_mod
    );

    // the strip image is a conformal invariant of the configuration
    let shift = MobiusMap::new(2.0, 3.0, 0.0, 1.0).unwrap(); // z -> 2z + 3
    let mapped = BoundaryConfig::new(
        shift.apply_real(cfg.u1),
        shift.apply_real(cfg.u2),
        shift.apply_real(2.1),
        shift.apply(cfg.w),
    )
    .unwrap();
    let sp2 = strip_map(&mapped).unwrap();
    println!(
        "after z -> 2z+3:           ({:.6}, {:.6})  (image unchanged)",
        sp2.x, sp2.y
    );
    println!();

    // harmonic measure and its additivity
    let w = Complex64::new(0.0, 1.0);
    let h1 = harmonic_measure(w, -1.0, 0.0).unwrap();
    let h2 = harmonic_measure(w, 0.0, 1.0).unwrap();
    let h = harmonic_measure(w, -1.0, 1.0).unwrap();
    println!("harmonic measure from i: (-1,0) -> {h1:.6}, (0,1) -> {h2:.6}, sum {:.6} = (-1,1) -> {h:.6}", h1 + h2);
}
