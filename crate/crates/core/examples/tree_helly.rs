//! Pairwise-intersecting subtrees share a point. Solves seeded families of
//! up to six subtrees and compares with an exhaustive edge scan.
//!
//! cargo run --release --example tree_helly

use geohelly::solver::{generate_instance, oracle_grid, random_tree};
use geohelly::{solve_general, SolveOptions, SpaceModel};

fn main() -> geohelly::Result<()> {
    for seed in 0..8 {
        let space = SpaceModel::Tree(random_tree(seed, 12)?);
        let m = 3 + seed as usize % 4;
        let problem = generate_instance(seed, &space, m)?;
        let report = solve_general(&problem, &SolveOptions::for_space(&space).with_eps(1e-9))?;
        let oracle = oracle_grid(&problem, 1e-3)?;
        println!(
            "seed {seed}, {m} subtrees: {} at {:?}, residual {:e}, oracle agrees: {}",
            report.status.as_str(),
            report.point,
            report.residual,
            oracle.is_some()
        );
    }
    Ok(())
}
