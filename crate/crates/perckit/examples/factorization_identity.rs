//! The factorization identity P4² = KF·P3(u1,w)·P3(u3,w)·P2(u1,u3),
//! checked exactly on random configurations.
//!
//! ```bash
//! cargo run --release --example factorization_identity
//! ```

use num_complex::Complex64;
use perckit::formulas::{constants, p2, p3, p4};
use perckit::rng::CounterRng;

fn main() {
    let kf = constants().kf;
    let mut rng = CounterRng::stream(2024, 0);
    let mut worst = 0.0f64;
    println!("{:>10} {:>10} {:>18} {:>14} {:>14}  rel diff", "u1", "u3", "w", "P4^2", "KF P3 P3 P2");
    for k in 0..10_000 {
        let u1 = -3.0 + 3.0 * rng.uniform();
        let u3 = u1 + 0.3 + 4.0 * rng.uniform();
        let w = Complex64::new(-3.0 + 7.0 * rng.uniform(), 0.1 + 4.0 * rng.uniform());
        let lhs = p4(u1, u3, w).unwrap().powi(2);
        let rhs = kf * p3(u1, w).unwrap() * p3(u3, w).unwrap() * p2(u1, u3).unwrap();
        let rel = (lhs / rhs - 1.0).abs();
        worst = worst.max(rel);
        if k < 5 {
            println!(
                "{u1:>10.4} {u3:>10.4} {w:>18.4} {lhs:>14.8} {rhs:>14.8}  {rel:.2e}"
            );
        }
    }
    println!("...");
    println!("worst relative difference over 10000 random configurations: {worst:.3e}");
    assert!(worst < 1e-10, "identity violated");
    println!("identity holds to 1e-10");
}
