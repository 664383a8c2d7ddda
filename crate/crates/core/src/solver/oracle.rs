//! Reference searches that do not use the cone map.

use rayon::prelude::*;

use super::{Problem, SearchRegion};
use crate::error::{invalid, Result};
use crate::spaces::{ConvexBody, ModelPoint, SpaceModel, TreePoint};

const MAX_GRID_POINTS: f64 = 4e9;
const ROW_CHUNK: usize = 64;

#[derive(Clone, Debug)]
pub struct GridScan {
    pub point: ModelPoint,
    pub residual: f64,
    pub points_scanned: u64,
}

/// Minimum-residual point of a regular grid with the given spacing, or `None`
/// when no grid point comes within `resolution` of every body.
pub fn oracle_grid(problem: &Problem, resolution: f64) -> Result<Option<ModelPoint>> {
    let scan = oracle_grid_scan(problem, resolution)?;
    Ok((scan.residual <= resolution).then_some(scan.point))
}

/// Exhaustive grid scan over the problem's search region. The scan stops early
/// at the first block of rows containing a point of zero residual; the result
/// is deterministic regardless of thread count.
pub fn oracle_grid_scan(problem: &Problem, resolution: f64) -> Result<GridScan> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(invalid("grid resolution must be positive"));
    }
    let space = &problem.space;
    let bodies = &problem.bodies;
    match (space, problem.bounds.as_ref()) {
        (SpaceModel::Euclidean { n }, Some(SearchRegion::Box { lo, hi })) => {
            if lo.len() != *n || hi.len() != *n || lo.iter().zip(hi).any(|(a, b)| !(a <= b)) {
                return Err(invalid("search box does not match the space"));
            }
            let counts: Vec<usize> = lo
                .iter()
                .zip(hi)
                .map(|(a, b)| ((b - a) / resolution).ceil() as usize + 1)
                .collect();
            guard(&counts)?;
            let axis = |j: usize, i: usize| (lo[j] + i as f64 * resolution).min(hi[j]);
            Ok(scan_rows(counts[0], |row| {
                let mut idx = vec![0usize; *n];
                idx[0] = row;
                let mut best = (f64::INFINITY, Vec::new());
                let mut scanned = 0;
                loop {
                    let x: Vec<f64> = idx.iter().enumerate().map(|(j, &i)| axis(j, i)).collect();
                    let r = space.residual(bodies, &ModelPoint::Euclidean(x.clone()));
                    scanned += 1;
                    if r < best.0 {
                        best = (r, x);
                        if r == 0.0 {
                            break;
                        }
                    }
                    // odometer over the remaining axes
                    let mut j = *n;
                    loop {
                        j -= 1;
                        if j == 0 {
                            return (best.0, ModelPoint::Euclidean(best.1), scanned);
                        }
                        idx[j] += 1;
                        if idx[j] < counts[j] {
                            break;
                        }
                        idx[j] = 0;
                    }
                }
                (best.0, ModelPoint::Euclidean(best.1), scanned)
            }))
        }
        (SpaceModel::Hyperbolic, Some(SearchRegion::Disk { radius })) => {
            let radius = radius.min(1.0 - 1e-9);
            let count = (2.0 * radius / resolution).ceil() as usize + 1;
            guard(&[count, count])?;
            let coord = |i: usize| (-radius + i as f64 * resolution).min(radius);
            Ok(scan_rows(count, |row| {
                let x = coord(row);
                let mut best = (f64::INFINITY, [0.0, 0.0]);
                let mut scanned = 0;
                for col in 0..count {
                    let z = [x, coord(col)];
                    if z[0] * z[0] + z[1] * z[1] > radius * radius {
                        continue;
                    }
                    let r = space.residual(bodies, &ModelPoint::Hyperbolic(z));
                    scanned += 1;
                    if r < best.0 {
                        best = (r, z);
                        if r == 0.0 {
                            break;
                        }
                    }
                }
                (best.0, ModelPoint::Hyperbolic(best.1), scanned)
            }))
        }
        (SpaceModel::Tree(t), None | Some(SearchRegion::WholeTree)) => {
            let total: f64 = t.edges().iter().map(|e| e.weight / resolution + 1.0).sum();
            if total > MAX_GRID_POINTS {
                return Err(invalid("grid is too fine for the search region"));
            }
            Ok(scan_rows(t.edges().len(), |e| {
                let w = t.edges()[e].weight;
                let steps = (w / resolution).ceil() as usize;
                let mut best = (f64::INFINITY, TreePoint::new(e, 0.0));
                for i in 0..=steps {
                    let p = TreePoint::new(e, (i as f64 * resolution).min(w));
                    let r = space.residual(bodies, &ModelPoint::Tree(p));
                    if r < best.0 {
                        best = (r, p);
                        if r == 0.0 {
                            break;
                        }
                    }
                }
                (best.0, ModelPoint::Tree(t.canonical(best.1)), steps as u64 + 1)
            }))
        }
        _ => Err(invalid(format!(
            "grid oracle needs a bounded search region matching the {} space",
            space.kind_name()
        ))),
    }
}

fn guard(counts: &[usize]) -> Result<()> {
    if counts.iter().map(|&c| c as f64).product::<f64>() > MAX_GRID_POINTS {
        return Err(invalid("grid is too fine for the search region"));
    }
    Ok(())
}

// Rows are scanned in parallel blocks; ties keep the earliest row.
fn scan_rows(rows: usize, scan: impl Fn(usize) -> (f64, ModelPoint, u64) + Sync) -> GridScan {
    let mut best: Option<(f64, ModelPoint)> = None;
    let mut scanned = 0;
    for start in (0..rows).step_by(ROW_CHUNK) {
        let block: Vec<_> = (start..rows.min(start + ROW_CHUNK)).into_par_iter().map(&scan).collect();
        for (r, p, s) in block {
            scanned += s;
            if best.as_ref().is_none_or(|(b, _)| r < *b) {
                best = Some((r, p));
            }
        }
        if best.as_ref().is_some_and(|(r, _)| *r == 0.0) {
            break;
        }
    }
    let (residual, point) = best.unwrap_or((f64::INFINITY, ModelPoint::Euclidean(Vec::new())));
    GridScan {
        point,
        residual,
        points_scanned: scanned,
    }
}

#[derive(Clone, Debug)]
pub struct ProjectionResult {
    pub point: ModelPoint,
    pub residual: f64,
    /// Full sweeps over all constraints that were performed.
    pub iterations: usize,
}

/// Cyclic projections onto the individual halfspaces and balls, starting from
/// the center of the search box (or the origin).
pub fn oracle_projection(problem: &Problem, iterations: usize) -> Result<ProjectionResult> {
    let SpaceModel::Euclidean { n } = problem.space else {
        return Err(invalid("the projection oracle is Euclidean only"));
    };
    let start = match &problem.bounds {
        Some(SearchRegion::Box { lo, hi }) => lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect(),
        _ => vec![0.0; n],
    };
    oracle_projection_from(problem, start, iterations)
}

pub fn oracle_projection_from(problem: &Problem, start: Vec<f64>, iterations: usize) -> Result<ProjectionResult> {
    let SpaceModel::Euclidean { n } = problem.space else {
        return Err(invalid("the projection oracle is Euclidean only"));
    };
    if start.len() != n {
        return Err(invalid(format!("start point needs {n} coordinates")));
    }
    let residual = |x: &[f64]| problem.residual(&ModelPoint::Euclidean(x.to_vec()));
    let mut x = start;
    let mut r = residual(&x);
    let mut done = 0;
    while done < iterations && r > 1e-12 {
        for body in &problem.bodies {
            let ConvexBody::Euclidean(b) = body else {
                return Err(invalid("the projection oracle is Euclidean only"));
            };
            for h in &b.halfspaces {
                if h.signed_excess(&x) > 0.0 {
                    x = h.project(&x);
                }
            }
            for ball in &b.balls {
                if ball.signed_excess(&x) > 0.0 {
                    x = ball.project(&x);
                }
            }
        }
        done += 1;
        r = residual(&x);
    }
    Ok(ProjectionResult {
        point: ModelPoint::Euclidean(x),
        residual: r,
        iterations: done,
    })
}
