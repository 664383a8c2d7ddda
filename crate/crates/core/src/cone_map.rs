//! The continuous map `f: Δ → X` built by geodesic coning over the face
//! lattice of the standard simplex.
//!
//! Given convex bodies `A_0, ..., A_{m-1}`, each nonempty face `Δ_I` has a
//! partial intersection `P_I = ∩_{j ∉ I} A_j` (the whole space when `I` is
//! everything) and a basepoint `p_I ∈ P_I`. A point `z` with support `I` is
//! written as `z = (1 - s) c_I + s z'` with `c_I` the barycenter of `Δ_I`,
//! `s = 1 - |I| min_{i ∈ I} z_i` and `z'` on the boundary of `Δ_I`; then
//! `f(z) = geodesic(p_I, f(z'), s)`. Because `f(z')` lies in a smaller face whose
//! partial intersection is contained in `P_I`, and geodesics between points of
//! a convex set stay in it, `f(Δ_I) ⊆ P_I` holds for every face.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::simplex::{BarycentricPoint, GridVertex};
use crate::spaces::{ConvexBody, ModelPoint, SpaceModel};

/// Largest supported number of bodies (the basepoint table has `2^m` slots).
pub const MAX_BODIES: usize = 20;

/// `P_I` together with its basepoint.
#[derive(Clone, Debug)]
pub struct PartialIntersection {
    pub index_set: Vec<usize>,
    pub body: ConvexBody,
    pub basepoint: ModelPoint,
}

#[derive(Clone, Debug)]
pub struct ConeMap {
    space: SpaceModel,
    bodies: Vec<ConvexBody>,
    // indexed by the face bit mask; slot 0 is unused
    basepoints: Vec<ModelPoint>,
    tolerance: f64,
}

fn mask_of(index_set: &[usize]) -> u64 {
    index_set.iter().fold(0, |m, &i| m | (1 << i))
}

fn indices_of(mask: u64, m: usize) -> Vec<usize> {
    (0..m).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Builds the cone map from witnesses of the `(m-1)`-fold intersections.
///
/// `witnesses[S]` for `S = [m] \ {i}` (sorted, zero-based) becomes the vertex
/// image `p_{i}`. Larger faces reuse the basepoint of the face with its largest
/// index removed, so `p_I = p_{min I}`.
pub fn build_cone_map(
    space: &SpaceModel,
    bodies: &[ConvexBody],
    witnesses: &BTreeMap<Vec<usize>, ModelPoint>,
    tolerance: f64,
) -> Result<ConeMap> {
    let m = bodies.len();
    check_size(m)?;
    let mut vertex_images = Vec::with_capacity(m);
    for i in 0..m {
        let subset: Vec<usize> = (0..m).filter(|&j| j != i).collect();
        let w = witnesses
            .get(&subset)
            .ok_or_else(|| Error::MissingWitness { subset: subset.clone() })?;
        space.validate_point(w)?;
        for &j in &subset {
            let v = space.violation(&bodies[j], w);
            if !(v <= tolerance) {
                return Err(Error::InvalidWitness { subset, body: j, violation: v });
            }
        }
        vertex_images.push(w.clone());
    }
    let full = 1u64 << m;
    let mut basepoints = Vec::with_capacity(full as usize);
    basepoints.push(vertex_images[0].clone());
    for mask in 1..full {
        let lowest = mask.trailing_zeros() as usize;
        basepoints.push(vertex_images[lowest].clone());
    }
    ConeMap::from_table(space.clone(), bodies.to_vec(), basepoints, tolerance)
}

fn check_size(m: usize) -> Result<()> {
    if m < 2 {
        return Err(invalid("a cone map needs at least two bodies"));
    }
    if m > MAX_BODIES {
        return Err(invalid(format!("at most {MAX_BODIES} bodies are supported, got {m}")));
    }
    Ok(())
}

impl ConeMap {
    /// Uses an explicit basepoint for every nonempty face, keyed by sorted
    /// zero-based index set.
    pub fn with_basepoints(
        space: &SpaceModel,
        bodies: &[ConvexBody],
        basepoints: &BTreeMap<Vec<usize>, ModelPoint>,
        tolerance: f64,
    ) -> Result<Self> {
        let m = bodies.len();
        check_size(m)?;
        let full = 1u64 << m;
        let mut table = Vec::with_capacity(full as usize);
        for mask in 1..full {
            let p = basepoints
                .get(&indices_of(mask, m))
                .ok_or_else(|| Error::MissingWitness { subset: indices_of(mask, m) })?;
            table.push(p.clone());
        }
        // placeholder for the empty face
        table.insert(0, table[0].clone());
        Self::from_table(space.clone(), bodies.to_vec(), table, tolerance)
    }

    fn from_table(
        space: SpaceModel,
        bodies: Vec<ConvexBody>,
        basepoints: Vec<ModelPoint>,
        tolerance: f64,
    ) -> Result<Self> {
        let m = bodies.len();
        for b in &bodies {
            space.validate_body(b)?;
        }
        for mask in 1..(1u64 << m) {
            let p = &basepoints[mask as usize];
            space.validate_point(p)?;
            for j in (0..m).filter(|&j| mask & (1 << j) == 0) {
                let v = space.violation(&bodies[j], p);
                if !(v <= tolerance) {
                    return Err(Error::InvalidWitness {
                        subset: indices_of(!mask & ((1 << m) - 1), m),
                        body: j,
                        violation: v,
                    });
                }
            }
        }
        Ok(Self {
            space,
            bodies,
            basepoints,
            tolerance,
        })
    }

    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn bodies(&self) -> &[ConvexBody] {
        &self.bodies
    }

    /// Number of bodies `m`.
    pub fn body_count(&self) -> usize {
        self.bodies.len()
    }

    /// Dimension of the domain simplex, `m - 1`.
    pub fn dim(&self) -> usize {
        self.bodies.len() - 1
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn basepoint(&self, index_set: &[usize]) -> Option<&ModelPoint> {
        let mask = mask_of(index_set);
        if index_set.is_empty() || mask >= 1 << self.bodies.len() {
            return None;
        }
        self.basepoints.get(mask as usize)
    }

    pub fn partial_intersection(&self, index_set: &[usize]) -> Result<PartialIntersection> {
        let basepoint = self
            .basepoint(index_set)
            .ok_or_else(|| invalid(format!("no face with index set {index_set:?}")))?
            .clone();
        let mask = mask_of(index_set);
        let outside = (0..self.bodies.len())
            .filter(|&j| mask & (1 << j) == 0)
            .map(|j| &self.bodies[j]);
        let mut sorted = index_set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Ok(PartialIntersection {
            index_set: sorted,
            body: self.space.intersect_all(outside)?,
            basepoint,
        })
    }

    pub fn evaluate(&self, z: &BarycentricPoint) -> Result<ModelPoint> {
        if z.dim() != self.dim() {
            return Err(invalid(format!(
                "point of a {}-simplex given to a map on the {}-simplex",
                z.dim(),
                self.dim()
            )));
        }
        self.eval_float(z.coords().to_vec())
    }

    fn eval_float(&self, coords: Vec<f64>) -> Result<ModelPoint> {
        let mask = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0.0)
            .fold(0u64, |m, (i, _)| m | (1 << i));
        let base = &self.basepoints[mask as usize];
        let size = mask.count_ones() as f64;
        if size == 1.0 {
            return Ok(base.clone());
        }
        let low = coords.iter().copied().filter(|c| *c > 0.0).fold(f64::INFINITY, f64::min);
        let s = 1.0 - size * low;
        if s <= f64::EPSILON {
            return Ok(base.clone());
        }
        let inner: Vec<f64> = coords
            .iter()
            .map(|&c| if c > 0.0 { (c - low) / s } else { 0.0 })
            .collect();
        let boundary = self.eval_float(inner)?;
        self.space.geodesic(base, &boundary, s.min(1.0))
    }

    /// Evaluates at a grid vertex using exact integer arithmetic for the face
    /// decomposition.
    pub fn evaluate_grid(&self, v: &GridVertex, resolution: u32) -> Result<ModelPoint> {
        let nums: Vec<u64> = v.numerators().iter().map(|&a| a as u64).collect();
        self.evaluate_rational(&nums, resolution as u64)
    }

    /// Evaluates at the point with coordinates `numerators[i] / denominator`.
    pub fn evaluate_rational(&self, numerators: &[u64], denominator: u64) -> Result<ModelPoint> {
        if numerators.len() != self.bodies.len() || numerators.iter().sum::<u64>() != denominator {
            return Err(invalid("rational point does not lie on the domain simplex"));
        }
        self.eval_rational(numerators.to_vec(), denominator)
    }

    fn eval_rational(&self, nums: Vec<u64>, den: u64) -> Result<ModelPoint> {
        let mask = nums
            .iter()
            .enumerate()
            .filter(|(_, a)| **a > 0)
            .fold(0u64, |m, (i, _)| m | (1 << i));
        let base = &self.basepoints[mask as usize];
        let size = mask.count_ones() as u64;
        if size == 1 {
            return Ok(base.clone());
        }
        let low = nums.iter().copied().filter(|a| *a > 0).min().unwrap_or(0);
        let rest = den - size * low;
        if rest == 0 {
            return Ok(base.clone());
        }
        let inner: Vec<u64> = nums.iter().map(|&a| if a > 0 { a - low } else { 0 }).collect();
        let boundary = self.eval_rational(inner, rest)?;
        self.space.geodesic(base, &boundary, rest as f64 / den as f64)
    }

    /// Largest observed `dist(f(z), f(z')) / |z - z'|_1` over `trials` random
    /// pairs with `|z - z'|_1 <= delta`.
    pub fn continuity_probe(&self, trials: usize, delta: f64, seed: u64) -> Result<f64> {
        if !(delta > 0.0) {
            return Err(invalid("continuity probe needs delta > 0"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = self.dim();
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let z = random_simplex_point(&mut rng, d);
            let w = random_simplex_point(&mut rng, d);
            let gap: f64 = z.iter().zip(&w).map(|(a, b)| (a - b).abs()).sum();
            if gap == 0.0 {
                continue;
            }
            let lambda = (delta / gap).min(1.0) * rng.gen_range(0.01..=1.0);
            let z2: Vec<f64> = z.iter().zip(&w).map(|(a, b)| a + lambda * (b - a)).collect();
            let step: f64 = z.iter().zip(&z2).map(|(a, b)| (a - b).abs()).sum();
            if step == 0.0 {
                continue;
            }
            let fz = self.eval_float(z)?;
            let fz2 = self.eval_float(z2)?;
            worst = worst.max(self.space.dist_unchecked(&fz, &fz2) / step);
        }
        Ok(worst)
    }
}

pub(crate) fn random_simplex_point(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..=dim).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{Ball, EuclideanBody, Halfspace};

    fn line() -> SpaceModel {
        SpaceModel::euclidean(1).unwrap()
    }

    fn interval(lo: f64, hi: f64) -> ConvexBody {
        ConvexBody::Euclidean(EuclideanBody::new(
            vec![
                Halfspace::new(vec![1.0], hi).unwrap(),
                Halfspace::new(vec![-1.0], -lo).unwrap(),
            ],
            vec![],
        ))
    }

    fn pt(x: f64) -> ModelPoint {
        ModelPoint::Euclidean(vec![x])
    }

    // f(e_0) = 0, f(e_1) = 1, f(c) = 0.25 over the 1-simplex
    fn explicit_map() -> ConeMap {
        let bodies = vec![interval(0.5, 2.0), interval(-1.0, 0.5)];
        let table = BTreeMap::from([(vec![0], pt(0.0)), (vec![1], pt(1.0)), (vec![0, 1], pt(0.25))]);
        ConeMap::with_basepoints(&line(), &bodies, &table, 1e-9).unwrap()
    }

    #[test]
    fn hand_evaluated_recursion() {
        let cm = explicit_map();
        let z = BarycentricPoint::new(vec![0.75, 0.25]).unwrap();
        assert_eq!(cm.evaluate(&z).unwrap(), pt(0.125));
        // independent route: the explicit piecewise-linear formula
        let direct = |a: f64| if a >= 0.5 { 0.25 - 0.25 * (2.0 * a - 1.0) } else { 0.25 + 0.75 * (1.0 - 2.0 * a) };
        for i in 0..=20 {
            let a = i as f64 / 20.0;
            let z = BarycentricPoint::new(vec![a, 1.0 - a]).unwrap();
            let ModelPoint::Euclidean(v) = cm.evaluate(&z).unwrap() else { unreachable!() };
            assert!((v[0] - direct(a)).abs() < 1e-12, "a = {a}");
        }
    }

    #[test]
    fn vertices_and_barycenters() {
        let cm = explicit_map();
        assert_eq!(cm.evaluate(&BarycentricPoint::vertex(1, 0)).unwrap(), pt(0.0));
        assert_eq!(cm.evaluate(&BarycentricPoint::vertex(1, 1)).unwrap(), pt(1.0));
        let c = BarycentricPoint::face_barycenter(1, &[0, 1]).unwrap();
        assert_eq!(cm.evaluate(&c).unwrap(), pt(0.25));
    }

    #[test]
    fn explicit_map_probe_bound() {
        let cm = explicit_map();
        let ratio = cm.continuity_probe(2000, 0.05, 3).unwrap();
        assert!(ratio > 0.0 && ratio <= 2.0, "ratio {ratio}");
        assert!(cm.continuity_probe(10, 0.0, 3).is_err());
    }

    #[test]
    fn identical_bodies_give_constant_map() {
        let s = SpaceModel::euclidean(2).unwrap();
        let disk = ConvexBody::Euclidean(EuclideanBody::new(vec![], vec![Ball::new(vec![0.0, 0.0], 1.0).unwrap()]));
        let w = ModelPoint::Euclidean(vec![0.1, 0.2]);
        let bodies = vec![disk.clone(), disk.clone(), disk.clone(), disk];
        let witnesses: BTreeMap<_, _> = (0..4)
            .map(|i| ((0..4).filter(|&j| j != i).collect::<Vec<_>>(), w.clone()))
            .collect();
        let cm = build_cone_map(&s, &bodies, &witnesses, 1e-9).unwrap();
        for mask in 1u64..16 {
            assert_eq!(cm.basepoint(&indices_of(mask, 4)).unwrap(), &w);
        }
        assert_eq!(cm.continuity_probe(200, 0.1, 1).unwrap(), 0.0);
    }

    #[test]
    fn peel_rule_basepoints() {
        let s = line();
        let bodies = vec![interval(-10.0, 10.0); 3];
        let witnesses = BTreeMap::from([
            (vec![1, 2], pt(1.0)),
            (vec![0, 2], pt(2.0)),
            (vec![0, 1], pt(3.0)),
        ]);
        let cm = build_cone_map(&s, &bodies, &witnesses, 1e-9).unwrap();
        assert_eq!(cm.basepoint(&[0]).unwrap(), &pt(1.0));
        assert_eq!(cm.basepoint(&[1, 2]).unwrap(), &pt(2.0));
        assert_eq!(cm.basepoint(&[0, 1, 2]).unwrap(), &pt(1.0));
        let mid = BarycentricPoint::new(vec![0.0, 0.5, 0.5]).unwrap();
        assert_eq!(cm.evaluate(&mid).unwrap(), pt(2.0));
    }

    #[test]
    fn missing_and_invalid_witnesses() {
        let s = line();
        let bodies = vec![interval(0.0, 1.0), interval(2.0, 3.0), interval(-5.0, 5.0)];
        let mut witnesses = BTreeMap::from([(vec![1, 2], pt(2.5)), (vec![0, 2], pt(0.5))]);
        match build_cone_map(&s, &bodies, &witnesses, 1e-9) {
            Err(Error::MissingWitness { subset }) => assert_eq!(subset, vec![0, 1]),
            other => panic!("unexpected {other:?}"),
        }
        witnesses.insert(vec![0, 1], pt(1.5));
        match build_cone_map(&s, &bodies, &witnesses, 1e-9) {
            Err(Error::InvalidWitness { subset, body, violation }) => {
                assert_eq!(subset, vec![0, 1]);
                assert_eq!(body, 0);
                assert!((violation - 0.5).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn grid_and_float_paths_agree() {
        let cm = explicit_map();
        for a in 0..=8u32 {
            let v = GridVertex::new(vec![a, 8 - a], 8).unwrap();
            let exact = cm.evaluate_grid(&v, 8).unwrap();
            let float = cm.evaluate(&v.to_point(8)).unwrap();
            assert!(cm.space().dist_unchecked(&exact, &float) < 1e-12);
        }
    }
}
