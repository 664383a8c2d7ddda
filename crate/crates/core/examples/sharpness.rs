//! Slabs along the facets of a regular simplex: every n of them meet, all
//! n + 1 do not. The search ends best-effort with a residual near
//! `inradius - width`, and the slabs meet once the width reaches the inradius.
//!
//! cargo run --release --example sharpness

use geohelly::solver::{oracle_grid, sharpness_instance_with_width, simplex_inradius};
use geohelly::{solve, SolveOptions};

fn main() -> geohelly::Result<()> {
    for n in 1..=3 {
        let r = simplex_inradius(n);
        for width in [0.01, r + 0.01] {
            let problem = sharpness_instance_with_width(n, width)?;
            let report = solve(&problem, &SolveOptions::for_space(&problem.space))?;
            let grid = oracle_grid(&problem, 5e-3)?;
            println!(
                "n = {n}, width {width:.3} (inradius {r:.4}): {} residual {:.4}, grid oracle {}",
                report.status.as_str(),
                report.residual,
                if grid.is_some() { "finds a point" } else { "finds nothing" }
            );
        }
    }
    Ok(())
}
