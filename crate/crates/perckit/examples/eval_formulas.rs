//! Evaluate every closed-form density at reference configurations:
//! Cardy crossing, the three- and four-point densities, the strip
//! function G and the five-point density with its strip coordinates.
//!
//! ```bash
//! cargo run --release --example eval_formulas
//! ```

use num_complex::Complex64;
use perckit::conformal::{strip_map, BoundaryConfig};
use perckit::formulas::{
    cardy_crossing, cardy_of_cross_ratio, five_point_f, four_point_f, g_strip, three_point_c,
    three_point_c_at_scale,
};

fn main() {
    println!("Cardy crossing");
    println!("  eta = 1/4          -> {:.12}", cardy_of_cross_ratio(0.25).unwrap());
    println!("  eta = 1/2          -> {:.12}", cardy_of_cross_ratio(0.5).unwrap());
    println!(
        "  (0,1) <-> (2,3)    -> {:.12}",
        cardy_crossing(0.0, 1.0, 2.0, 3.0).unwrap()
    );
    println!();

    println!("Three-point boundary density");
    println!("  C(0,1,2)           -> {:.12}", three_point_c(0.0, 1.0, 2.0).unwrap());
    println!("  C(0,1,3)           -> {:.12}", three_point_c(0.0, 1.0, 3.0).unwrap());
    for s in [4.0, 8.0, 12.0] {
        let pre = three_point_c_at_scale(0.0, 1.0, 3.0, s).unwrap();
        println!(
            "  e^(s/3) C(0,1,3,s) -> {:.12}  (s = {s}; pre-limit crossing converges to the limit density)",
            (s / 3.0f64).exp() * pre
        );
    }
    println!();

    let w = Complex64::new(0.0, 1.0);
    println!("Four-point density");
    println!("  F(-1,1,i)          -> {:.12}", four_point_f(-1.0, 1.0, w).unwrap());
    println!();

    println!("Strip function");
    println!("  G(10, 1/2)         -> {:.12}  (asymptote 2^(1/3) = {:.12})",
        g_strip(10.0, 0.5).unwrap(),
        2.0f64.powf(1.0 / 3.0)
    );
    println!("  G(0.7, 0.3)        -> {:.12}", g_strip(0.7, 0.3).unwrap());
    println!();

    let cfg = BoundaryConfig::new(0.0, 1.0, 3.0, Complex64::new(2.0, 1.5)).unwrap();
    let sp = strip_map(&cfg).unwrap();
    println!("Five-point density at (0, 1, 3, w = 2+1.5i)");
    println!("  F5                 -> {:.12}", five_point_f(&cfg).unwrap());
    println!("  strip image        -> x = {:.12}, y = {:.12}", sp.x, sp.y);
    println!("  |psi'(w)|          -> {:.12}", sp.deriv_mod);
}
