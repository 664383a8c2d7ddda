//! Cyclic projections as a baseline: they converge on feasible families and
//! stall on the empty sharpness family.
//!
//! cargo run --release --example projection_baseline

use geohelly::solver::{generate_instance, oracle_projection, sharpness_instance, simplex_inradius};
use geohelly::SpaceModel;

fn main() -> geohelly::Result<()> {
    let plane = SpaceModel::euclidean(2)?;
    for seed in 0..4 {
        let problem = generate_instance(seed, &plane, 5)?;
        let res = oracle_projection(&problem, 10_000)?;
        println!("seed {seed}: residual {:.2e} after {} sweeps", res.residual, res.iterations);
    }
    let slabs = sharpness_instance(2)?;
    for iterations in [10, 100, 1_000, 10_000] {
        let res = oracle_projection(&slabs, iterations)?;
        println!("slabs, {iterations:>5} sweeps: residual {:.4}", res.residual);
    }
    println!("inradius {:.4}", simplex_inradius(2));
    Ok(())
}
