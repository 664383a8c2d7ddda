//! JSON problem files and reports.
//!
//! ```json
//! {
//!   "space": {"kind": "euclidean", "n": 2},
//!   "bodies": [{"halfspaces": [[1, 0, 1]], "balls": [[0, 0, 2]]}],
//!   "witnesses": {"[1]": [0.5, 0.5]},
//!   "bounds": {"lo": [-2, -2], "hi": [2, 2]}
//! }
//! ```
//!
//! Points are plain number arrays: coordinates in Euclidean space, disk
//! coordinates in the hyperbolic plane and `[edge, offset]` on a tree. Witness
//! keys list one-based body indices. See `docs/format.md` for every field.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::solver::{Problem, SearchRegion, TraceEntry, WitnessReport};
use crate::spaces::{
    Ball, ConvexBody, EuclideanBody, HalfPlane, Halfspace, HyperbolicBall, HyperbolicBody, MetricTree,
    ModelPoint, SpaceModel, TreeEdge, TreePoint,
};

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawSpace {
    Euclidean { n: usize },
    Tree { vertices: usize, edges: Vec<(usize, usize, f64)> },
    Hyperbolic,
}

#[derive(Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBody {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    halfspaces: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    halfplanes: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    balls: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    markers: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawBounds {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Disk { radius: f64 },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    space: RawSpace,
    bodies: Vec<RawBody>,
    #[serde(default)]
    witnesses: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bounds: Option<RawBounds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arity: Option<usize>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn read_problem(path: impl AsRef<Path>) -> Result<Problem> {
    parse_problem(&std::fs::read_to_string(path)?)
}

/// Parses and validates the structure of a problem file. The intersection
/// hypothesis is checked separately by [`Problem::validate`].
pub fn parse_problem(text: &str) -> Result<Problem> {
    let raw: RawProblem = serde_json::from_str(text).map_err(parse_error)?;
    let space = match raw.space {
        RawSpace::Euclidean { n } => SpaceModel::euclidean(n)?,
        RawSpace::Hyperbolic => SpaceModel::Hyperbolic,
        RawSpace::Tree { vertices, edges } => SpaceModel::Tree(MetricTree::new(
            vertices,
            edges.into_iter().map(|(a, b, weight)| TreeEdge { a, b, weight }).collect(),
        )?),
    };
    let bodies = raw
        .bodies
        .iter()
        .enumerate()
        .map(|(i, b)| body_from_raw(&space, b).map_err(|e| invalid(format!("body {}: {e}", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let mut witnesses = BTreeMap::new();
    for (key, coords) in raw.witnesses {
        let subset = parse_subset(&key)?;
        let p = point_from_coords(&space, &coords).map_err(|e| invalid(format!("witness {key}: {e}")))?;
        witnesses.insert(subset, p);
    }
    let bounds = match (raw.bounds, &space) {
        (None, SpaceModel::Tree(_)) => Some(SearchRegion::WholeTree),
        (None, _) => None,
        (Some(RawBounds::Box { lo, hi }), SpaceModel::Euclidean { n }) if lo.len() == *n && hi.len() == *n => {
            Some(SearchRegion::Box { lo, hi })
        }
        (Some(RawBounds::Disk { radius }), SpaceModel::Hyperbolic) if radius > 0.0 && radius < 1.0 => {
            Some(SearchRegion::Disk { radius })
        }
        _ => return Err(invalid("bounds do not match the space")),
    };
    let mut problem = Problem::new(space, bodies, witnesses, bounds);
    if let Some(arity) = raw.arity {
        problem = problem.with_arity(arity);
    }
    Ok(problem)
}

/// `"[1,3,4]"` to the zero-based index set `[0, 2, 3]`.
pub fn parse_subset(key: &str) -> Result<Vec<usize>> {
    let bad = || invalid(format!("witness key {key:?} is not a list of one-based indices"));
    let inner = key.trim().strip_prefix('[').and_then(|k| k.strip_suffix(']')).ok_or_else(bad)?;
    let mut subset = inner
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| match s.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(bad()),
        })
        .collect::<Result<Vec<_>>>()?;
    subset.sort_unstable();
    subset.dedup();
    Ok(subset)
}

pub fn format_subset(subset: &[usize]) -> String {
    let items: Vec<String> = subset.iter().map(|i| (i + 1).to_string()).collect();
    format!("[{}]", items.join(","))
}

/// Reads a point given as a JSON number array.
pub fn parse_point(space: &SpaceModel, text: &str) -> Result<ModelPoint> {
    let coords: Vec<f64> = serde_json::from_str(text).map_err(parse_error)?;
    point_from_coords(space, &coords)
}

pub fn point_from_coords(space: &SpaceModel, coords: &[f64]) -> Result<ModelPoint> {
    let p = match space {
        SpaceModel::Euclidean { .. } => ModelPoint::Euclidean(coords.to_vec()),
        SpaceModel::Hyperbolic => match coords {
            [x, y] => ModelPoint::Hyperbolic([*x, *y]),
            _ => return Err(invalid("hyperbolic points have two coordinates")),
        },
        SpaceModel::Tree(t) => match coords {
            [e, offset] if e.fract() == 0.0 && *e >= 0.0 => {
                let p = TreePoint::new(*e as usize, *offset);
                t.validate(&p)?;
                ModelPoint::Tree(t.canonical(p))
            }
            _ => return Err(invalid("tree points are [edge, offset] with an integer edge")),
        },
    };
    space.validate_point(&p)?;
    Ok(p)
}

pub fn point_coords(p: &ModelPoint) -> Vec<f64> {
    match p {
        ModelPoint::Euclidean(v) => v.clone(),
        ModelPoint::Hyperbolic(z) => z.to_vec(),
        ModelPoint::Tree(t) => vec![t.edge as f64, t.offset],
    }
}

pub fn point_to_json(p: &ModelPoint) -> Value {
    match p {
        ModelPoint::Tree(t) => json!([t.edge, t.offset]),
        _ => json!(point_coords(p)),
    }
}

fn body_from_raw(space: &SpaceModel, raw: &RawBody) -> Result<ConvexBody> {
    match space {
        SpaceModel::Euclidean { n } => {
            if !raw.halfplanes.is_empty() || !raw.markers.is_empty() {
                return Err(invalid("euclidean bodies take halfspaces and balls"));
            }
            let halfspaces = raw
                .halfspaces
                .iter()
                .map(|h| {
                    if h.len() != n + 1 {
                        return Err(invalid(format!("halfspace needs {} numbers", n + 1)));
                    }
                    Halfspace::new(h[..*n].to_vec(), h[*n])
                })
                .collect::<Result<Vec<_>>>()?;
            let balls = raw
                .balls
                .iter()
                .map(|b| {
                    if b.len() != n + 1 {
                        return Err(invalid(format!("ball needs {} numbers", n + 1)));
                    }
                    Ball::new(b[..*n].to_vec(), b[*n])
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ConvexBody::Euclidean(EuclideanBody::new(halfspaces, balls)))
        }
        SpaceModel::Hyperbolic => {
            if !raw.halfspaces.is_empty() || !raw.markers.is_empty() {
                return Err(invalid("hyperbolic bodies take halfplanes and balls"));
            }
            let halfplanes = raw
                .halfplanes
                .iter()
                .map(|h| HalfPlane::from_klein([h[0], h[1]], h[2]))
                .collect::<Result<Vec<_>>>()?;
            let balls = raw
                .balls
                .iter()
                .map(|b| match b[..] {
                    [x, y, r] => HyperbolicBall::new([x, y], r),
                    _ => Err(invalid("hyperbolic ball needs [x, y, radius]")),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ConvexBody::Hyperbolic(HyperbolicBody::new(halfplanes, balls)))
        }
        SpaceModel::Tree(_) => {
            if !raw.halfspaces.is_empty() || !raw.halfplanes.is_empty() || !raw.balls.is_empty() {
                return Err(invalid("tree bodies take markers"));
            }
            if raw.markers.is_empty() {
                return Err(invalid("tree body needs at least one marker"));
            }
            let markers = raw
                .markers
                .iter()
                .map(|m| point_from_coords(space, m))
                .collect::<Result<Vec<_>>>()?;
            space.tree_hull(&markers)
        }
    }
}

fn body_to_raw(body: &ConvexBody) -> RawBody {
    let mut raw = RawBody::default();
    match body {
        ConvexBody::Euclidean(b) => {
            raw.halfspaces = b
                .halfspaces
                .iter()
                .map(|h| h.normal().iter().copied().chain([h.offset()]).collect())
                .collect();
            raw.balls = b
                .balls
                .iter()
                .map(|ball| ball.center().iter().copied().chain([ball.radius()]).collect())
                .collect();
        }
        ConvexBody::Hyperbolic(b) => {
            raw.halfplanes = b
                .halfplanes
                .iter()
                .map(|h| {
                    let (n, c) = h.klein();
                    [n[0], n[1], c]
                })
                .collect();
            raw.balls = b
                .balls
                .iter()
                .map(|ball| vec![ball.center()[0], ball.center()[1], ball.radius()])
                .collect();
        }
        // a subtree is the hull of its piece endpoints
        ConvexBody::Tree(b) => {
            for (e, piece) in b.pieces().iter().enumerate() {
                if let Some((lo, hi)) = piece {
                    raw.markers.push([e as f64, *lo]);
                    if hi > lo {
                        raw.markers.push([e as f64, *hi]);
                    }
                }
            }
        }
    }
    raw
}

pub fn problem_to_value(problem: &Problem) -> Value {
    let space = match &problem.space {
        SpaceModel::Euclidean { n } => RawSpace::Euclidean { n: *n },
        SpaceModel::Hyperbolic => RawSpace::Hyperbolic,
        SpaceModel::Tree(t) => RawSpace::Tree {
            vertices: t.vertex_count(),
            edges: t.edges().iter().map(|e| (e.a, e.b, e.weight)).collect(),
        },
    };
    let bounds = match &problem.bounds {
        Some(SearchRegion::Box { lo, hi }) => Some(RawBounds::Box {
            lo: lo.clone(),
            hi: hi.clone(),
        }),
        Some(SearchRegion::Disk { radius }) => Some(RawBounds::Disk { radius: *radius }),
        _ => None,
    };
    let raw = RawProblem {
        space,
        bodies: problem.bodies.iter().map(body_to_raw).collect(),
        witnesses: problem
            .witnesses
            .iter()
            .map(|(k, p)| (format_subset(k), point_coords(p)))
            .collect(),
        bounds,
        arity: (problem.arity != problem.space.dimension() + 1).then_some(problem.arity),
    };
    serde_json::to_value(raw).expect("problem serializes")
}

pub fn problem_to_json(problem: &Problem) -> String {
    serde_json::to_string_pretty(&problem_to_value(problem)).expect("problem serializes")
}

pub fn write_problem(problem: &Problem, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, problem_to_json(problem) + "\n")?;
    Ok(())
}

pub fn report_to_value(report: &WitnessReport) -> Value {
    let mut v = json!({
        "status": report.status.as_str(),
        "point": point_to_json(&report.point),
        "residual": report.residual,
        "depth": report.depth,
        "evaluations": report.evaluations,
    });
    if let Some(p) = &report.cell_point {
        v["cell_point"] = point_to_json(p);
    }
    if let Some(s) = &report.failed_subset {
        v["failed_subset"] = json!(s.iter().map(|i| i + 1).collect::<Vec<_>>());
    }
    v
}

pub fn trace_to_value(trace: &[TraceEntry]) -> Value {
    Value::Array(
        trace
            .iter()
            .map(|t| {
                json!({
                    "resolution": t.resolution,
                    "best_residual": t.best_residual,
                    "evaluations": t.evaluations,
                    "fully_labeled": t.fully_labeled,
                })
            })
            .collect(),
    )
}
