//! Martingale checks along the Loewner flow: under plain SLE(6) the
//! observable |g'(u3)|^{1/3}·C(t) has constant mean, and under
//! SLE(6,2,−2) so does |g'(w)|^{5/48}·F5(t). A perturbed exponent breaks
//! the flatness.
//!
//! ```bash
//! cargo run --release --example sle_martingales
//! ```

use num_complex::Complex64;
use perckit::conformal::BoundaryConfig;
use perckit::formulas::{five_point_f, three_point_c};
use perckit::loewner::{martingale_check_c, martingale_check_h, SdeParams};

fn main() {
    let n = 4000;
    let checkpoints = [0.0, 0.01, 0.05, 0.1];

    println!("plain SLE(6): E[|g'(u3)|^(1/3) C(t)] from (0, 1, 3)");
    let m0 = three_point_c(0.0, 1.0, 3.0).unwrap();
    let stats = martingale_check_c(
        0.0,
        1.0,
        3.0,
        &SdeParams::plain(6.0).unwrap(),
        n,
        7,
        &checkpoints,
        1.0 / 3.0,
    )
    .unwrap();
    for s in &stats {
        println!(
            "  t = {:<5} mean {:.6} ± {:.6}   (M0 = {m0:.6}, dev {:+.2} sigma, {} alive)",
            s.t,
            s.mean,
            s.stderr,
            if s.stderr > 1e-12 { (s.mean - m0) / s.stderr } else { 0.0 },
            s.n_alive
        );
    }

    println!();
    println!("negative control: covariance exponent 1/2 instead of 1/3");
    let stats = martingale_check_c(
        0.0,
        1.0,
        3.0,
        &SdeParams::plain(6.0).unwrap(),
        n,
        7,
        &checkpoints,
        0.5,
    )
    .unwrap();
    for s in &stats {
        println!(
            "  t = {:<5} mean {:.6} ± {:.6}   (dev {:+.2} sigma)",
            s.t,
            s.mean,
            s.stderr,
            if s.stderr > 1e-12 { (s.mean - m0) / s.stderr } else { 0.0 }
        );
    }

    println!();
    println!("SLE(6,2,-2): E[|g'(w)|^(5/48) F5(t)] from (0, 1, 3, w = 2+1.5i)");
    let cfg = BoundaryConfig::new(0.0, 1.0, 3.0, Complex64::new(2.0, 1.5)).unwrap();
    let h0 = five_point_f(&cfg).unwrap();
    let stats = martingale_check_h(
        &cfg,
        &SdeParams::sle_6_2_m2(),
        n,
        7,
        &checkpoints,
        11.0 / 96.0,
    )
    .unwrap();
    for s in &stats {
        println!(
            "  t = {:<5} mean {:.6} ± {:.6}   (M0 = {h0:.6}, dev {:+.2} sigma, {} alive)",
            s.t,
            s.mean,
            s.stderr,
            if s.stderr > 1e-12 { (s.mean - h0) / s.stderr } else { 0.0 },
            s.n_alive
        );
    }
}
