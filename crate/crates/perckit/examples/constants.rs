//! The four constants of the connection-probability formulas, with the
//! cross-checks between their printed forms.
//!
//! ```bash
//! cargo run --release --example constants
//! ```

use perckit::formulas::{constants, gauss_value, kf_forms};
use perckit::numerics::{gamma, hyp2f1};

fn main() {
    let k = constants();
    println!("K3 = {:.15}   sqrt(pi)/(Gamma(1/3) Gamma(7/6))", k.k3);
    println!("K4 = {:.15}   18/(5 pi)", k.k4);
    println!("K5 = {:.15}   K4 pi^(5/48)/(2^(5/48) A)", k.k5);
    println!("KF = {:.15}   2^7 pi^5/(3^(3/2) Gamma(1/3)^9)", k.kf);
    println!();

    let a = gauss_value();
    let gauss = gamma(7.0 / 6.0).unwrap() / (gamma(5.0 / 3.0).unwrap() * gamma(1.5).unwrap());
    println!("A  = 2F1(-1/2,-1/3;7/6;1)          = {a:.15}");
    println!("     Gamma(7/6)/(Gamma(5/3)Gamma(3/2)) = {gauss:.15}");
    println!("     agreement: {:.2e}", (a / gauss - 1.0).abs());
    println!();

    let forms = kf_forms();
    println!("KF, three printed forms:");
    println!("  Gamma form          {:.15}", forms.gamma_form);
    println!("  K-chain form        {:.15}", forms.chain_form);
    println!("  hypergeometric form {:.15}", forms.hypergeometric_form);
    let spread = (forms.chain_form / forms.gamma_form - 1.0)
        .abs()
        .max((forms.hypergeometric_form / forms.gamma_form - 1.0).abs());
    println!("  relative spread     {spread:.2e}");

    // the log special point, for good measure
    let two_ln_two = hyp2f1(1.0, 1.0, 2.0, 0.5).unwrap();
    println!();
    println!(
        "2F1(1,1;2;1/2) = {two_ln_two:.15} (2 ln 2 = {:.15})",
        2.0 * std::f64::consts::LN_2
    );
}
