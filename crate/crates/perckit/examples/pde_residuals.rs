//! Finite-difference residuals of the differential identities: the
//! three-point operator on C, the five-point operator on F, and the
//! product operator on C·F, plus a negative control with a perturbed
//! exponent.
//!
//! ```bash
//! cargo run --release --example pde_residuals
//! ```

use num_complex::Complex64;
use perckit::conformal::BoundaryConfig;
use perckit::pde::{
    cardy_pde_residual, f_pde_residual, fc_pde_residual, fc_pde_residual_with_bracket_exponent,
    leading_mode, radial_pde_residual, RadialGrid, StencilSpec,
};
use perckit::rng::CounterRng;

fn main() {
    let spec = StencilSpec::default();
    let cfg = BoundaryConfig::new(0.0, 1.0, 3.0, Complex64::new(2.0, 1.5)).unwrap();

    let r = cardy_pde_residual((0.0, 1.0, 3.0), &spec).unwrap();
    println!("three-point operator on C(0,1,3):     residual {:.3e}", r.value);

    let r = f_pde_residual(&cfg, &spec).unwrap();
    println!("five-point operator on F5:            residual {:.3e}", r.value);

    let r = fc_pde_residual(&cfg, &spec).unwrap();
    println!("product operator on C*F5:             residual {:.3e}", r.value);

    let r = fc_pde_residual_with_bracket_exponent(&cfg, &spec, 10.0 / 96.0).unwrap();
    println!("negative control (bracket 10/96):     residual {:.3e}  <- must be large", r.value);

    // sweep random admissible configurations
    let mut rng = CounterRng::stream(31, 0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let u1 = -2.0 + rng.uniform();
        let u2 = u1 + 0.5 + 4.5 * rng.uniform();
        let u3 = u2 + 0.5 + 4.5 * rng.uniform();
        let w = Complex64::new(u1 - 1.0 + (u3 - u1 + 2.0) * rng.uniform(), 0.5 + 2.5 * rng.uniform());
        let c = BoundaryConfig::new(u1, u2, u3, w).unwrap();
        worst = worst.max(fc_pde_residual(&c, &spec).unwrap().value.abs());
    }
    println!("product operator, 100 random configs: max residual {worst:.3e}");

    let grid = RadialGrid::sample(
        leading_mode,
        (0.5, 2.0 * std::f64::consts::PI - 0.5),
        201,
        (0.0, 1.0),
        101,
    )
    .unwrap();
    let r = radial_pde_residual(&grid, &spec).unwrap();
    println!("radial evolution on the leading mode: residual {:.3e}", r.value);
}
