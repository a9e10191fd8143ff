//! Interval hitting of plain SLE(6) against Cardy's crossing formula:
//! the probability that the curve from u2 touches [u3−h, u3+h] before
//! swallowing u1 equals the crossing probability (u1,u2) ↔ (u3−h, u3+h).
//!
//! ```bash
//! cargo run --release --example sle_hitting_cardy
//! ```

use perckit::loewner::{hit_cardy, SdeParams};

fn main() {
    let mut params = SdeParams::plain(6.0).unwrap().with_swallow_eps(1e-6);
    params.dt_adapt_c = 0.005;
    println!(
        "{:>6} {:>6} {:>6} {:>5}  {:>9} {:>9} {:>7}",
        "u1", "u2", "u3", "h", "monte", "cardy", "dev"
    );
    for (u1, u2, u3, h) in [
        (0.0, 1.0, 3.0, 0.5),
        (0.0, 1.0, 3.0, 0.2),
        (0.0, 1.0, 2.0, 0.4),
        (-1.0, 0.5, 4.0, 1.0),
    ] {
        let est = hit_cardy(u1, u2, u3, h, &params, 4000, 11).unwrap();
        let dev = (est.p_hat - est.cardy) / est.stderr;
        println!(
            "{u1:>6} {u2:>6} {u3:>6} {h:>5}  {:>9.5} {:>9.5} {dev:>+6.2}s",
            est.p_hat, est.cardy
        );
        assert!(est.n_horizon <= est.n / 500);
    }
    println!();
    println!("also the general-kappa drift of the conditioned process:");
    for kappa in [5.0, 6.0, 7.0] {
        let drift = perckit::loewner::general_kappa_drift(0.0, 1.0, 3.0, kappa).unwrap();
        let force = perckit::loewner::force_point_drift(0.0, 1.0, 3.0, kappa);
        println!(
            "  kappa {kappa}: conditioned drift {drift:+.6}, force-point drift {force:+.6}{}",
            if (drift - force).abs() < 1e-8 {
                "  (equal at kappa = 6)"
            } else {
                ""
            }
        );
    }
}
