//! Four and five convex polygons in the plane whose triples intersect.
//!
//! cargo run --release --example euclidean_helly

use geohelly::solver::{generate_instance, oracle_grid};
use geohelly::{solve_general, SolveOptions, SpaceModel};

fn main() -> geohelly::Result<()> {
    let plane = SpaceModel::euclidean(2)?;
    let opts = SolveOptions::for_space(&plane).with_eps(1e-3);
    for m in [4, 5] {
        for seed in 0..4 {
            let problem = generate_instance(seed, &plane, m)?;
            let report = solve_general(&problem, &opts)?;
            let grid = oracle_grid(&problem, 1e-3)?;
            println!(
                "m = {m}, seed {seed}: {} residual {:.2e}, depth {}, {} evaluations; grid oracle {}",
                report.status.as_str(),
                report.residual,
                report.depth,
                report.evaluations,
                if grid.is_some() { "agrees" } else { "found nothing" }
            );
            for t in &report.trace {
                println!(
                    "    k = {:>2}: best {:.3e}, {} fully-labeled cells",
                    t.resolution, t.best_residual, t.fully_labeled
                );
            }
        }
    }
    Ok(())
}
