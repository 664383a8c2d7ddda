//! Uniquely geodesic model spaces and convex bodies inside them.
//!
//! Three models are provided: Euclidean `R^n`, finite metric trees, and the
//! hyperbolic plane. Each exposes a distance, the unique geodesic between two
//! points parametrized proportionally to arclength, and convex bodies with a
//! continuous violation score that vanishes exactly on the closed body.
//!
//! Bodies are always closed. A numeric tolerance test cannot tell a set from
//! its closure, so sets with partially removed boundaries are not modeled.

pub mod euclidean;
pub mod hyperbolic;
pub mod tree;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use euclidean::{Ball, EuclideanBody, Halfspace};
pub use hyperbolic::{HalfPlane, HyperbolicBall, HyperbolicBody};
pub use tree::{MetricTree, TreeBody, TreeEdge, TreePoint};

#[derive(Clone, Debug, PartialEq)]
pub enum SpaceModel {
    Euclidean { n: usize },
    Tree(MetricTree),
    Hyperbolic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ModelPoint {
    Euclidean(Vec<f64>),
    Tree(TreePoint),
    Hyperbolic([f64; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ConvexBody {
    Euclidean(EuclideanBody),
    Tree(TreeBody),
    Hyperbolic(HyperbolicBody),
}

impl SpaceModel {
    pub fn euclidean(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("euclidean dimension must be at least 1"));
        }
        Ok(SpaceModel::Euclidean { n })
    }

    /// Covering dimension of the model.
    pub fn dimension(&self) -> usize {
        match self {
            SpaceModel::Euclidean { n } => *n,
            SpaceModel::Tree(_) => 1,
            SpaceModel::Hyperbolic => 2,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SpaceModel::Euclidean { .. } => "euclidean",
            SpaceModel::Tree(_) => "tree",
            SpaceModel::Hyperbolic => "hyperbolic",
        }
    }

    pub fn validate_point(&self, x: &ModelPoint) -> Result<()> {
        match (self, x) {
            (SpaceModel::Euclidean { n }, ModelPoint::Euclidean(v)) => {
                if v.len() != *n {
                    return Err(invalid(format!("expected {n} coordinates, got {}", v.len())));
                }
                if v.iter().any(|c| !c.is_finite()) {
                    return Err(invalid("euclidean coordinates must be finite"));
                }
                Ok(())
            }
            (SpaceModel::Tree(t), ModelPoint::Tree(p)) => t.validate(p),
            (SpaceModel::Hyperbolic, ModelPoint::Hyperbolic(z)) => hyperbolic::validate(z),
            _ => Err(invalid(format!("point {x:?} does not belong to a {} space", self.kind_name()))),
        }
    }

    pub fn validate_body(&self, body: &ConvexBody) -> Result<()> {
        match (self, body) {
            (SpaceModel::Euclidean { n }, ConvexBody::Euclidean(b)) if b.dimension_ok(*n) => Ok(()),
            (SpaceModel::Tree(t), ConvexBody::Tree(b)) if b.pieces().len() == t.edges().len() => Ok(()),
            (SpaceModel::Hyperbolic, ConvexBody::Hyperbolic(_)) => Ok(()),
            _ => Err(invalid(format!("body does not fit a {} space", self.kind_name()))),
        }
    }

    pub fn dist(&self, x: &ModelPoint, y: &ModelPoint) -> Result<f64> {
        self.validate_point(x)?;
        self.validate_point(y)?;
        Ok(self.dist_unchecked(x, y))
    }

    /// Distance without domain checks; mismatched kinds give `NaN`.
    pub fn dist_unchecked(&self, x: &ModelPoint, y: &ModelPoint) -> f64 {
        match (self, x, y) {
            (SpaceModel::Euclidean { .. }, ModelPoint::Euclidean(a), ModelPoint::Euclidean(b)) => {
                euclidean::dist(a, b)
            }
            (SpaceModel::Tree(t), ModelPoint::Tree(p), ModelPoint::Tree(q)) => t.dist(p, q),
            (SpaceModel::Hyperbolic, ModelPoint::Hyperbolic(z), ModelPoint::Hyperbolic(w)) => {
                hyperbolic::dist(z, w)
            }
            _ => f64::NAN,
        }
    }

    /// The point at fraction `t` of the unique segment from `x` to `y`.
    pub fn geodesic(&self, x: &ModelPoint, y: &ModelPoint, t: f64) -> Result<ModelPoint> {
        if !(0.0..=1.0).contains(&t) {
            return Err(invalid(format!("geodesic parameter {t} outside [0, 1]")));
        }
        self.validate_point(x)?;
        self.validate_point(y)?;
        Ok(match (self, x, y) {
            (SpaceModel::Euclidean { .. }, ModelPoint::Euclidean(a), ModelPoint::Euclidean(b)) => {
                if t == 0.0 {
                    x.clone()
                } else if t == 1.0 {
                    y.clone()
                } else {
                    ModelPoint::Euclidean(euclidean::lerp(a, b, t))
                }
            }
            (SpaceModel::Tree(tree), ModelPoint::Tree(p), ModelPoint::Tree(q)) => {
                ModelPoint::Tree(tree.geodesic(p, q, t))
            }
            (SpaceModel::Hyperbolic, ModelPoint::Hyperbolic(z), ModelPoint::Hyperbolic(w)) => {
                ModelPoint::Hyperbolic(hyperbolic::geodesic(z, w, t))
            }
            _ => unreachable!("validated above"),
        })
    }

    /// Continuous, nonnegative, and zero exactly on the closed body. A point of
    /// the wrong model kind scores `+inf`.
    pub fn violation(&self, body: &ConvexBody, x: &ModelPoint) -> f64 {
        match (self, body, x) {
            (SpaceModel::Euclidean { .. }, ConvexBody::Euclidean(b), ModelPoint::Euclidean(v)) => {
                b.violation(v)
            }
            (SpaceModel::Tree(t), ConvexBody::Tree(b), ModelPoint::Tree(p)) => t.violation(b, p),
            (SpaceModel::Hyperbolic, ConvexBody::Hyperbolic(b), ModelPoint::Hyperbolic(z)) => {
                b.violation(z)
            }
            _ => f64::INFINITY,
        }
    }

    /// `max_i violation(bodies[i], x)`; zero for an empty list.
    pub fn residual(&self, bodies: &[ConvexBody], x: &ModelPoint) -> f64 {
        bodies
            .iter()
            .map(|b| self.violation(b, x))
            .fold(0.0, f64::max)
    }

    pub fn intersect(&self, a: &ConvexBody, b: &ConvexBody) -> Result<ConvexBody> {
        match (self, a, b) {
            (SpaceModel::Euclidean { .. }, ConvexBody::Euclidean(x), ConvexBody::Euclidean(y)) => {
                Ok(ConvexBody::Euclidean(x.intersect(y)))
            }
            (SpaceModel::Tree(t), ConvexBody::Tree(x), ConvexBody::Tree(y)) => {
                Ok(ConvexBody::Tree(t.intersect(x, y)))
            }
            (SpaceModel::Hyperbolic, ConvexBody::Hyperbolic(x), ConvexBody::Hyperbolic(y)) => {
                Ok(ConvexBody::Hyperbolic(x.intersect(y)))
            }
            _ => Err(invalid("cannot intersect bodies of different models")),
        }
    }

    /// The whole space as a body.
    pub fn whole(&self) -> ConvexBody {
        match self {
            SpaceModel::Euclidean { .. } => ConvexBody::Euclidean(EuclideanBody::default()),
            SpaceModel::Tree(t) => ConvexBody::Tree(TreeBody::full(t)),
            SpaceModel::Hyperbolic => ConvexBody::Hyperbolic(HyperbolicBody::default()),
        }
    }

    pub fn intersect_all<'a>(&self, bodies: impl IntoIterator<Item = &'a ConvexBody>) -> Result<ConvexBody> {
        bodies
            .into_iter()
            .try_fold(self.whole(), |acc, b| self.intersect(&acc, b))
    }

    /// Smallest subtree containing the markers; trees only.
    pub fn tree_hull(&self, markers: &[ModelPoint]) -> Result<ConvexBody> {
        let SpaceModel::Tree(t) = self else {
            return Err(invalid("tree_hull requires a metric tree"));
        };
        let pts = markers
            .iter()
            .map(|m| match m {
                ModelPoint::Tree(p) => Ok(*p),
                _ => Err(invalid("tree_hull markers must be tree points")),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConvexBody::Tree(t.hull(&pts)?))
    }
}
