//! Self-dual crossing on the triangular lattice: the open left-right
//! crossing probability of an L×L parallelogram is exactly 1/2 at
//! p = 1/2 (complementarity + transpose symmetry), so the estimate must
//! sit within Monte Carlo error of 0.5 at every size.
//!
//! ```bash
//! cargo run --release --example lattice_crossing
//! ```

use perckit::lattice::{measure, Arc, EventSpec, LatticeRegion};

fn main() {
    let event = EventSpec::Crossing {
        arc_a: Arc::Left,
        arc_b: Arc::Right,
    };
    println!("{:>5} {:>8} {:>10} {:>10} {:>8}", "L", "n", "p_hat", "stderr", "dev");
    for l in [32usize, 64, 128] {
        let region = LatticeRegion::new(l, l).unwrap();
        let est = measure(&event, &region, 20_000, 42).unwrap();
        println!(
            "{l:>5} {:>8} {:>10.5} {:>10.5} {:>+7.2}s",
            est.n,
            est.p_hat,
            est.stderr,
            (est.p_hat - 0.5) / est.stderr
        );
    }
    println!();
    println!("crossing to a bottom interval vs Cardy's formula (eta = 1/4):");
    let l = 256usize;
    let region = LatticeRegion::new(l, 3 * l / 5).unwrap();
    let est = measure(
        &EventSpec::Crossing {
            arc_a: Arc::BottomSegment { from_x: 0.25, to_x: 0.375 },
            arc_b: Arc::BottomSegment { from_x: 0.50, to_x: 0.625 },
        },
        &region,
        20_000,
        42,
    )
    .unwrap();
    let cardy = perckit::formulas::cardy_of_cross_ratio(0.25).unwrap();
    println!(
        "  L = {l}: p_hat {:.5} ± {:.5}, cardy {cardy:.5}, diff {:+.5}",
        est.p_hat,
        est.stderr,
        est.p_hat - cardy
    );
}
