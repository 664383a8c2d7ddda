//! Convex polygons in the hyperbolic plane, given by Klein chords.
//!
//! cargo run --release --example hyperbolic_helly

use geohelly::solver::{generate_instance, oracle_grid};
use geohelly::{solve_general, SolveOptions, SpaceModel};

fn main() -> geohelly::Result<()> {
    let space = SpaceModel::Hyperbolic;
    let opts = SolveOptions::for_space(&space);
    for (m, seed) in [(4, 0), (4, 1), (5, 2), (6, 3)] {
        let problem = generate_instance(seed, &space, m)?;
        let report = solve_general(&problem, &opts)?;
        println!(
            "m = {m}: {} at {:?}, residual {:.2e}; grid oracle at 1e-3 {}",
            report.status.as_str(),
            report.point,
            report.residual,
            if oracle_grid(&problem, 1e-3)?.is_some() { "agrees" } else { "found nothing" }
        );
    }
    Ok(())
}
