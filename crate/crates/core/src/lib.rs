//! Computational Helly theorems in uniquely geodesic spaces.
//!
//! Given convex bodies `A_1..A_m` in a model space of covering dimension `n`
//! and a common point for every `n + 1` of them, [`solve_general`] searches for
//! a point common to all. The search maps the standard simplex into the space
//! with a continuous cone map whose faces land in partial intersections, then
//! locates fully-labeled cells of a Sperner labeling on refining grids.
//!
//! Module overview:
//!
//! - [`simplex`]: barycentric points, Kuhn grids, Sperner and KKM checks.
//! - [`spaces`]: Euclidean space, metric trees and the hyperbolic plane.
//! - [`cone_map`]: the cone map built from witness points.
//! - [`solver`]: witness search, reductions, oracles and generators.
//! - [`format`]: the JSON problem and report formats.
//! - [`render`]: SVG pictures of planar and tree instances.
//! - [`cli`]: the `helly` command line.

pub mod cli;
pub mod cone_map;
pub mod error;
pub mod format;
pub mod render;
pub mod simplex;
pub mod solver;
pub mod spaces;

pub use cone_map::{build_cone_map, ConeMap, PartialIntersection};
pub use error::{Error, Result};
pub use simplex::{BarycentricPoint, Cell, GridSpec, GridVertex, Labeling};
pub use solver::{solve, solve_general, Problem, SearchRegion, SolveOptions, Status, WitnessReport};
pub use spaces::{ConvexBody, ModelPoint, SpaceModel};
