//! Writes SVG pictures of a planar, a hyperbolic and a tree instance with the
//! solver's point highlighted.
//!
//! cargo run --release --example render_instances -- /tmp

use geohelly::render::render_svg;
use geohelly::solver::{generate_instance, random_tree};
use geohelly::{solve_general, SolveOptions, SpaceModel};

fn main() -> geohelly::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| ".".into());
    let spaces = [
        ("plane", SpaceModel::euclidean(2)?),
        ("disk", SpaceModel::Hyperbolic),
        ("tree", SpaceModel::Tree(random_tree(5, 14)?)),
    ];
    for (name, space) in spaces {
        let problem = generate_instance(5, &space, 5)?;
        let report = solve_general(&problem, &SolveOptions::for_space(&space))?;
        let path = format!("{dir}/{name}.svg");
        std::fs::write(&path, render_svg(&problem, Some(&report.point))?)?;
        println!("{path}: {} residual {:.2e}", report.status.as_str(), report.residual);
    }
    Ok(())
}
