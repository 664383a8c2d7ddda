//! Distances and geodesic midpoints in the three model spaces.
//!
//! cargo run --example geodesics

use geohelly::spaces::{MetricTree, ModelPoint, SpaceModel, TreeEdge, TreePoint};

fn show(space: &SpaceModel, x: &ModelPoint, y: &ModelPoint) -> geohelly::Result<()> {
    let d = space.dist(x, y)?;
    let mid = space.geodesic(x, y, 0.5)?;
    println!("{:>10}: d = {d:.6}, midpoint {mid:?}", space.kind_name());
    println!(
        "            d(x, mid) = {:.6}, d(mid, y) = {:.6}",
        space.dist(x, &mid)?,
        space.dist(&mid, y)?
    );
    Ok(())
}

fn main() -> geohelly::Result<()> {
    show(
        &SpaceModel::euclidean(2)?,
        &ModelPoint::Euclidean(vec![0.0, 0.0]),
        &ModelPoint::Euclidean(vec![3.0, 4.0]),
    )?;

    // a path 0 - 1 - 2 with a branch 1 - 3
    let tree = MetricTree::new(
        4,
        vec![
            TreeEdge { a: 0, b: 1, weight: 1.0 },
            TreeEdge { a: 1, b: 2, weight: 2.0 },
            TreeEdge { a: 1, b: 3, weight: 0.5 },
        ],
    )?;
    show(
        &SpaceModel::Tree(tree),
        &ModelPoint::Tree(TreePoint::new(0, 0.25)),
        &ModelPoint::Tree(TreePoint::new(1, 1.5)),
    )?;

    show(
        &SpaceModel::Hyperbolic,
        &ModelPoint::Hyperbolic([0.0, 0.0]),
        &ModelPoint::Hyperbolic([0.5, 0.0]),
    )?;
    println!("            ln 3 = {:.6}", 3f64.ln());
    Ok(())
}
