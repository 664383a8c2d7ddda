//! Seeded instance generators.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{subsets, Problem, SearchRegion};
use crate::error::{invalid, Result};
use crate::spaces::hyperbolic::{klein_to_poincare, poincare_to_klein};
use crate::spaces::{
    ConvexBody, EuclideanBody, HalfPlane, Halfspace, HyperbolicBody, MetricTree, ModelPoint, SpaceModel,
    TreeEdge, TreePoint,
};

const EUCLIDEAN_MARGIN: f64 = 0.05;
const HYPERBOLIC_MARGIN: f64 = 0.03;
const DIRECTIONS: usize = 16;

/// A random tree on `vertex_count` vertices: vertex `i` attaches to an earlier
/// vertex, edge weights are uniform in `[0.5, 2]`.
pub fn random_tree(seed: u64, vertex_count: usize) -> Result<MetricTree> {
    if vertex_count < 2 {
        return Err(invalid("a random tree needs at least 2 vertices"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (1..vertex_count)
        .map(|b| TreeEdge {
            a: rng.gen_range(0..b),
            b,
            weight: rng.gen_range(0.5..=2.0),
        })
        .collect();
    MetricTree::new(vertex_count, edges)
}

/// A problem of `m` bodies in `space` whose `(n + 1)`-subfamilies intersect.
///
/// A random point is drawn for every `(n + 1)`-subset and becomes its witness;
/// body `i` is a convex set around the points of the subsets containing `i`.
/// Whether all `m` bodies share a point is left to chance.
pub fn generate_instance(seed: u64, space: &SpaceModel, m: usize) -> Result<Problem> {
    if m == 0 {
        return Err(invalid("need at least one body"));
    }
    if m > 20 {
        return Err(invalid("at most 20 bodies are supported"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = space.dimension() + 1;
    let keys = if m <= h { vec![(0..m).collect()] } else { subsets(m, h) };
    let mut witnesses = BTreeMap::new();
    for key in keys {
        let p = random_point(&mut rng, space);
        witnesses.insert(key, p);
    }
    // with a single witness every body also gets a private random point
    let extra: Vec<ModelPoint> = if m <= h {
        (0..m).map(|_| random_point(&mut rng, space)).collect()
    } else {
        Vec::new()
    };
    let markers = |i: usize| -> Vec<ModelPoint> {
        let mut pts: Vec<ModelPoint> = witnesses
            .iter()
            .filter(|(k, _)| k.contains(&i))
            .map(|(_, p)| p.clone())
            .collect();
        if let Some(e) = extra.get(i) {
            pts.push(e.clone());
        }
        pts
    };

    let (bodies, bounds) = match space {
        SpaceModel::Euclidean { n } => {
            let dirs = directions(&mut rng, *n);
            let bodies = (0..m)
                .map(|i| euclidean_polytope(&dirs, &markers(i)))
                .collect::<Result<Vec<_>>>()?;
            let all: Vec<&Vec<f64>> = witnesses.values().chain(&extra).map(coords).collect();
            let lo = (0..*n)
                .map(|j| all.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min) - 2.0 * EUCLIDEAN_MARGIN)
                .collect();
            let hi = (0..*n)
                .map(|j| all.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max) + 2.0 * EUCLIDEAN_MARGIN)
                .collect();
            (bodies, SearchRegion::Box { lo, hi })
        }
        SpaceModel::Tree(_) => {
            let bodies = (0..m)
                .map(|i| space.tree_hull(&markers(i)))
                .collect::<Result<Vec<_>>>()?;
            (bodies, SearchRegion::WholeTree)
        }
        SpaceModel::Hyperbolic => {
            let offset = rng.gen_range(0.0..2.0 * PI / DIRECTIONS as f64);
            let mut outer: f64 = 0.0;
            let bodies = (0..m)
                .map(|i| {
                    let (body, reach) = hyperbolic_polygon(offset, &markers(i))?;
                    outer = outer.max(reach);
                    Ok(body)
                })
                .collect::<Result<Vec<_>>>()?;
            let klein_radius = (outer / (PI / DIRECTIONS as f64).cos()).min(0.999);
            let radius = klein_to_poincare(&[klein_radius, 0.0])[0];
            (bodies, SearchRegion::Disk { radius })
        }
    };
    Ok(Problem::new(space.clone(), bodies, witnesses, Some(bounds)))
}

fn coords(p: &ModelPoint) -> &Vec<f64> {
    match p {
        ModelPoint::Euclidean(v) => v,
        _ => unreachable!("euclidean generator"),
    }
}

fn random_point(rng: &mut ChaCha8Rng, space: &SpaceModel) -> ModelPoint {
    match space {
        SpaceModel::Euclidean { n } => ModelPoint::Euclidean((0..*n).map(|_| rng.gen::<f64>()).collect()),
        SpaceModel::Tree(t) => {
            let e = rng.gen_range(0..t.edges().len());
            let w = t.edges()[e].weight;
            ModelPoint::Tree(t.canonical(TreePoint::new(e, rng.gen_range(0.0..=w))))
        }
        SpaceModel::Hyperbolic => {
            let r = 0.6 * rng.gen::<f64>().sqrt();
            let a = rng.gen_range(0.0..2.0 * PI);
            ModelPoint::Hyperbolic([r * a.cos(), r * a.sin()])
        }
    }
}

// Evenly spaced circle directions in the plane; axis and random unit
// directions otherwise.
fn directions(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    if n == 1 {
        return vec![vec![1.0], vec![-1.0]];
    }
    if n == 2 {
        let offset = rng.gen_range(0.0..2.0 * PI / DIRECTIONS as f64);
        return (0..DIRECTIONS)
            .map(|j| {
                let a = offset + 2.0 * PI * j as f64 / DIRECTIONS as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
    }
    let mut dirs = Vec::new();
    for j in 0..n {
        for s in [1.0, -1.0] {
            let mut u = vec![0.0; n];
            u[j] = s;
            dirs.push(u);
        }
    }
    while dirs.len() < 2 * n + DIRECTIONS {
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 0.1 && len <= 1.0 {
            dirs.push(u.iter().map(|x| x / len).collect());
        }
    }
    dirs
}

fn euclidean_polytope(dirs: &[Vec<f64>], pts: &[ModelPoint]) -> Result<ConvexBody> {
    let halfspaces = dirs
        .iter()
        .map(|u| {
            let support = pts
                .iter()
                .map(|p| coords(p).iter().zip(u).map(|(a, b)| a * b).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            Halfspace::new(u.clone(), support + EUCLIDEAN_MARGIN)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvexBody::Euclidean(EuclideanBody::new(halfspaces, vec![])))
}

// Supporting chords of the Klein hull pushed out by a margin. Returns the body
// and its largest chord offset.
fn hyperbolic_polygon(offset: f64, pts: &[ModelPoint]) -> Result<(ConvexBody, f64)> {
    let klein: Vec<[f64; 2]> = pts
        .iter()
        .map(|p| match p {
            ModelPoint::Hyperbolic(z) => poincare_to_klein(z),
            _ => unreachable!("hyperbolic generator"),
        })
        .collect();
    let mut halfplanes = Vec::new();
    let mut reach: f64 = 0.0;
    for j in 0..DIRECTIONS {
        let a = offset + 2.0 * PI * j as f64 / DIRECTIONS as f64;
        let u = [a.cos(), a.sin()];
        let c = klein
            .iter()
            .map(|k| u[0] * k[0] + u[1] * k[1])
            .fold(f64::NEG_INFINITY, f64::max)
            + HYPERBOLIC_MARGIN;
        if c < 0.999 {
            halfplanes.push(HalfPlane::from_klein(u, c)?);
            reach = reach.max(c);
        } else {
            reach = 1.0;
        }
    }
    Ok((ConvexBody::Hyperbolic(HyperbolicBody::new(halfplanes, vec![])), reach))
}

/// Inradius of the regular `n`-simplex with unit edges.
pub fn simplex_inradius(n: usize) -> f64 {
    1.0 / ((2 * n * (n + 1)) as f64).sqrt()
}

/// The sharpness family with slab width 0.01; see
/// [`sharpness_instance_with_width`].
pub fn sharpness_instance(n: usize) -> Result<Problem> {
    sharpness_instance_with_width(n, 0.01)
}

/// `n + 1` slabs along the facets of a regular unit-edge `n`-simplex.
///
/// Body `j` is `{ x : h_j <= u_j · x <= h_j + width }` where `u_j` is the inward
/// normal of the facet opposite vertex `j` and `h_j` its offset. Every `n` of
/// the slabs meet at a vertex, so the arity is `n`. While `width` is below the
/// inradius the family has no common point and every point violates some slab
/// by at least `inradius - width`.
pub fn sharpness_instance_with_width(n: usize, width: f64) -> Result<Problem> {
    if n == 0 {
        return Err(invalid("sharpness instances need n >= 1"));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(invalid("slab width must be positive"));
    }
    let verts = regular_simplex(n);
    let centroid: Vec<f64> = (0..n)
        .map(|c| verts.iter().map(|v| v[c]).sum::<f64>() / (n + 1) as f64)
        .collect();
    let mut bodies = Vec::new();
    for j in 0..=n {
        // the facet opposite j contains every other vertex
        let other = (j + 1) % (n + 1);
        let dir: Vec<f64> = verts[j].iter().zip(&centroid).map(|(a, b)| a - b).collect();
        let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        let u: Vec<f64> = dir.iter().map(|x| x / len).collect();
        let h: f64 = u.iter().zip(&verts[other]).map(|(a, b)| a * b).sum();
        let lower = Halfspace::new(u.iter().map(|x| -x).collect(), -h)?;
        let upper = Halfspace::new(u, h + width)?;
        bodies.push(ConvexBody::Euclidean(EuclideanBody::new(vec![lower, upper], vec![])));
    }
    let witnesses = (0..=n)
        .map(|j| {
            let key: Vec<usize> = (0..=n).filter(|&i| i != j).collect();
            (key, ModelPoint::Euclidean(verts[j].clone()))
        })
        .collect();
    let lo = (0..n)
        .map(|c| verts.iter().map(|v| v[c]).fold(f64::INFINITY, f64::min) - 0.05)
        .collect();
    let hi = (0..n)
        .map(|c| verts.iter().map(|v| v[c]).fold(f64::NEG_INFINITY, f64::max) + 0.05)
        .collect();
    Ok(Problem::new(
        SpaceModel::euclidean(n)?,
        bodies,
        witnesses,
        Some(SearchRegion::Box { lo, hi }),
    )
    .with_arity(n))
}

// Vertices e_0..e_n of R^{n+1} mapped into the hyperplane sum = 0 with an
// orthonormal basis, scaled to unit edge length.
fn regular_simplex(n: usize) -> Vec<Vec<f64>> {
    let dim = n + 1;
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 0..n {
        // e_k - e_{k+1} spans the hyperplane
        let mut v = vec![0.0; dim];
        v[k] = 1.0;
        v[k + 1] = -1.0;
        for b in &basis {
            let p: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= p * y;
            }
        }
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        basis.push(v.iter().map(|x| x / len).collect());
    }
    let scale = 1.0 / 2f64.sqrt();
    (0..dim)
        .map(|i| basis.iter().map(|b| b[i] * scale).collect())
        .collect()
}
