//! End-to-end witness search for Helly-type intersection problems.
//!
//! A [`Problem`] holds `m` convex bodies in a model space together with
//! witnesses for every subfamily of a fixed size `h` (the arity, `n + 1` for an
//! `n`-dimensional space). For `m = h + 1` the search builds the cone map, labels
//! each grid vertex `z` by the most violated body at `f(z)` and scans Kuhn grids
//! of resolution `1, 2, 4, ...` for fully-labeled cells. Face containment of the
//! cone map makes that labeling admissible, so every level has an odd number of
//! fully-labeled cells. Their vertex and barycenter images are refined by a
//! convex line search along the geodesics joining them.
//!
//! Larger families are reduced one body at a time: `A'_i = A_i ∩ A_last`, with
//! witnesses for the reduced family obtained by solving `(h + 1)`-subfamilies.

mod generate;
mod oracle;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::cone_map::{build_cone_map, ConeMap};
use crate::error::{invalid, Error, Result};
use crate::simplex::{enumerate_grid, find_fully_labeled, Cell, GridSpec, GridVertex, Labeling};
use crate::spaces::{ConvexBody, ModelPoint, SpaceModel};

pub use generate::{generate_instance, random_tree, sharpness_instance, sharpness_instance_with_width, simplex_inradius};
pub use oracle::{oracle_grid, oracle_grid_scan, oracle_projection, oracle_projection_from, GridScan, ProjectionResult};

/// Tolerance for hypothesis witnesses supplied with a problem.
pub const WITNESS_TOLERANCE: f64 = 1e-9;

/// Bounded region scanned by the grid oracle.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchRegion {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Poincaré disk of the given Euclidean radius, centered at the origin.
    Disk { radius: f64 },
    WholeTree,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub space: SpaceModel,
    pub bodies: Vec<ConvexBody>,
    /// Witness points keyed by sorted zero-based index sets.
    pub witnesses: BTreeMap<Vec<usize>, ModelPoint>,
    /// Size of the witnessed subfamilies.
    pub arity: usize,
    pub bounds: Option<SearchRegion>,
}

impl Problem {
    /// A problem whose witnessed subfamilies have size `dimension + 1`.
    pub fn new(
        space: SpaceModel,
        bodies: Vec<ConvexBody>,
        witnesses: BTreeMap<Vec<usize>, ModelPoint>,
        bounds: Option<SearchRegion>,
    ) -> Self {
        let arity = space.dimension() + 1;
        Self {
            space,
            bodies,
            witnesses,
            arity,
            bounds,
        }
    }

    pub fn with_arity(mut self, arity: usize) -> Self {
        self.arity = arity;
        self
    }

    pub fn body_count(&self) -> usize {
        self.bodies.len()
    }

    pub fn residual(&self, x: &ModelPoint) -> f64 {
        self.space.residual(&self.bodies, x)
    }

    /// Index sets that must carry a witness: every `arity`-subset, or the full
    /// set when the family is no larger than the arity.
    pub fn required_subsets(&self) -> Vec<Vec<usize>> {
        let m = self.bodies.len();
        if m <= self.arity {
            vec![(0..m).collect()]
        } else {
            subsets(m, self.arity)
        }
    }

    /// Checks bodies, witness domains and the intersection hypothesis.
    pub fn validate(&self, tolerance: f64) -> Result<()> {
        if self.bodies.is_empty() {
            return Err(invalid("a problem needs at least one body"));
        }
        if self.arity == 0 {
            return Err(invalid("witness arity must be at least 1"));
        }
        for b in &self.bodies {
            self.space.validate_body(b)?;
        }
        let m = self.bodies.len();
        for (subset, w) in &self.witnesses {
            if subset.iter().any(|&i| i >= m) || subset.windows(2).any(|p| p[0] >= p[1]) {
                return Err(invalid(format!("witness key {subset:?} is not a sorted subset of the bodies")));
            }
            self.space.validate_point(w)?;
        }
        for subset in self.required_subsets() {
            let w = self
                .witnesses
                .get(&subset)
                .ok_or_else(|| Error::MissingWitness { subset: subset.clone() })?;
            for &j in &subset {
                let v = self.space.violation(&self.bodies[j], w);
                if !(v <= tolerance) {
                    return Err(Error::InvalidWitness { subset, body: j, violation: v });
                }
            }
        }
        Ok(())
    }
}

/// All `size`-subsets of `0..m` in lexicographic order.
pub fn subsets(m: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size <= m {
        rec(0, m, size, &mut Vec::with_capacity(size), &mut out);
    }
    out
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub eps: f64,
    /// Last grid resolution of the doubling schedule; a power of two.
    pub max_resolution: u32,
    pub witness_tolerance: f64,
    /// Fully-labeled cells per level whose images are line-searched.
    pub refine_cells: usize,
}

impl SolveOptions {
    /// `eps` defaults to 1e-6, or 1e-5 in the hyperbolic plane.
    pub fn for_space(space: &SpaceModel) -> Self {
        let eps = match space {
            SpaceModel::Hyperbolic => 1e-5,
            _ => 1e-6,
        };
        Self {
            eps,
            max_resolution: 64,
            witness_tolerance: WITNESS_TOLERANCE,
            refine_cells: 4,
        }
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_max_resolution(mut self, max_resolution: u32) -> Self {
        self.max_resolution = max_resolution;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            return Err(invalid("eps must be positive"));
        }
        if !self.max_resolution.is_power_of_two() {
            return Err(invalid(format!(
                "max resolution {} is not a power of two",
                self.max_resolution
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Found,
    BestEffort,
    InfeasibleHypothesis,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Found => "found",
            Status::BestEffort => "best_effort",
            Status::InfeasibleHypothesis => "infeasible_hypothesis",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub resolution: u32,
    pub best_residual: f64,
    pub evaluations: u64,
    pub fully_labeled: usize,
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub status: Status,
    pub point: ModelPoint,
    /// `max_i violation(A_i, point)` over the problem's bodies.
    pub residual: f64,
    /// Final grid resolution.
    pub depth: u32,
    pub evaluations: u64,
    pub trace: Vec<TraceEntry>,
    /// Image of the barycenter of the best fully-labeled cell at the last level.
    pub cell_point: Option<ModelPoint>,
    /// For reductions: the subfamily whose search failed.
    pub failed_subset: Option<Vec<usize>>,
}

struct Evaluated {
    point: ModelPoint,
    residual: f64,
    label: usize,
}

/// Searches for a common point of `m = arity + 1` bodies.
pub fn solve(problem: &Problem, opts: &SolveOptions) -> Result<WitnessReport> {
    opts.validate()?;
    let m = problem.body_count();
    if m != problem.arity + 1 {
        return Err(invalid(format!(
            "solve needs exactly arity + 1 = {} bodies, got {m}; use solve_general",
            problem.arity + 1
        )));
    }
    problem.validate(opts.witness_tolerance)?;
    let cm = build_cone_map(&problem.space, &problem.bodies, &problem.witnesses, opts.witness_tolerance)?;
    Search::new(&cm, opts).run()
}

struct Search<'a> {
    cm: &'a ConeMap,
    opts: &'a SolveOptions,
    containment: f64,
    cache: HashMap<GridVertex, Evaluated>,
    best: Option<(ModelPoint, f64)>,
    evaluations: u64,
}

impl<'a> Search<'a> {
    fn new(cm: &'a ConeMap, opts: &'a SolveOptions) -> Self {
        Self {
            cm,
            opts,
            containment: cm.tolerance() + 1e-12,
            cache: HashMap::new(),
            best: None,
            evaluations: 0,
        }
    }

    fn space(&self) -> &SpaceModel {
        self.cm.space()
    }

    fn residual(&self, x: &ModelPoint) -> f64 {
        self.space().residual(self.cm.bodies(), x)
    }

    fn offer(&mut self, point: &ModelPoint, residual: f64) {
        if self.best.as_ref().is_none_or(|(_, r)| residual < *r) {
            self.best = Some((point.clone(), residual));
        }
    }

    fn best_residual(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |(_, r)| *r)
    }

    // Values within the containment tolerance count as satisfied; the most
    // violated body (smallest index on ties) must lie in the support.
    fn label(&self, violations: &[f64], support: u64) -> Result<usize> {
        let mut arg = None;
        let mut top = 0.0;
        for (i, &v) in violations.iter().enumerate() {
            if v > self.containment && v > top {
                top = v;
                arg = Some(i);
            }
        }
        match arg {
            None => Ok(support.trailing_zeros() as usize),
            Some(i) if support & (1 << i) != 0 => Ok(i),
            Some(i) => Err(Error::InternalInvariant(format!(
                "label {i} outside the support {support:#b} (violation {top:e})"
            ))),
        }
    }

    fn evaluate_vertex(&self, v: &GridVertex, resolution: u32) -> Result<Evaluated> {
        let point = self.cm.evaluate_grid(v, resolution)?;
        let violations: Vec<f64> = self
            .cm
            .bodies()
            .iter()
            .map(|b| self.space().violation(b, &point))
            .collect();
        let residual = violations.iter().copied().fold(0.0, f64::max);
        let label = self.label(&violations, v.support_mask())?;
        Ok(Evaluated { point, residual, label })
    }

    fn run(mut self) -> Result<WitnessReport> {
        let d = self.cm.dim();
        let max_res = self.opts.max_resolution;
        let mut trace = Vec::new();
        let mut cell_point = None;
        let mut k = 1u32;
        loop {
            let spec = GridSpec::new(d, k)?;
            let scale = max_res / k;
            let fresh: Vec<GridVertex> = enumerate_grid(spec)
                .into_iter()
                .filter(|v| !self.cache.contains_key(&v.rescaled(scale)))
                .collect();
            let evaluated = fresh
                .par_iter()
                .map(|v| self.evaluate_vertex(v, k))
                .collect::<Result<Vec<_>>>()?;
            self.evaluations += fresh.len() as u64;
            for (v, e) in fresh.iter().zip(evaluated) {
                self.offer(&e.point, e.residual);
                self.cache.insert(v.rescaled(scale), e);
            }

            let mut fully_labeled = 0;
            if self.best_residual() > self.opts.eps {
                let labeling = Labeling::from_fn(spec, |v| self.cache[&v.rescaled(scale)].label);
                let cells = find_fully_labeled(spec, &labeling)
                    .map_err(|e| Error::InternalInvariant(format!("cone-map labeling rejected: {e}")))?;
                if cells.len() % 2 == 0 {
                    return Err(Error::InternalInvariant(format!(
                        "{} fully-labeled cells at resolution {k}",
                        cells.len()
                    )));
                }
                fully_labeled = cells.len();
                cell_point = self.refine(&cells, scale)?;
            }

            trace.push(TraceEntry {
                resolution: k,
                best_residual: self.best_residual(),
                evaluations: self.evaluations,
                fully_labeled,
            });
            if self.best_residual() <= self.opts.eps || k >= max_res {
                break;
            }
            k *= 2;
        }

        let (point, _) = self.best.take().expect("the coarsest grid is always evaluated");
        let residual = self.residual(&point);
        let status = if residual <= self.opts.eps {
            Status::Found
        } else {
            Status::BestEffort
        };
        Ok(WitnessReport {
            status,
            point,
            residual,
            depth: k,
            evaluations: self.evaluations,
            trace,
            cell_point,
            failed_subset: None,
        })
    }

    /// Evaluates barycenters of the most promising fully-labeled cells and line
    /// searches along geodesics between their images. Returns the barycenter
    /// image of the best-ranked cell.
    fn refine(&mut self, cells: &[Cell], scale: u32) -> Result<Option<ModelPoint>> {
        let mut ranked: Vec<(f64, &Cell)> = cells
            .iter()
            .map(|c| {
                let r = c
                    .vertices()
                    .iter()
                    .map(|v| self.cache[&v.rescaled(scale)].residual)
                    .fold(f64::INFINITY, f64::min);
                (r, c)
            })
            .collect();
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut first_center = None;
        for (_, cell) in ranked.into_iter().take(self.opts.refine_cells.max(1)) {
            let (nums, den) = cell.barycenter_numerators();
            let center = self.cm.evaluate_rational(&nums, den)?;
            let r = self.residual(&center);
            self.evaluations += 1;
            self.offer(&center, r);
            if first_center.is_none() {
                first_center = Some(center.clone());
            }
            let mut anchors: Vec<ModelPoint> = cell
                .vertices()
                .iter()
                .map(|v| self.cache[&v.rescaled(scale)].point.clone())
                .collect();
            anchors.push(center);
            for i in 0..anchors.len() {
                for j in i + 1..anchors.len() {
                    if self.best_residual() <= self.opts.eps {
                        return Ok(first_center);
                    }
                    self.line_search(&anchors[i], &anchors[j])?;
                }
            }
        }
        Ok(first_center)
    }

    // Golden-section search; the residual is convex along geodesics.
    fn line_search(&mut self, x: &ModelPoint, y: &ModelPoint) -> Result<()> {
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        if self.space().dist_unchecked(x, y) == 0.0 {
            return Ok(());
        }
        let eps = self.opts.eps;
        let eval = |s: &mut Self, t: f64| -> Result<f64> {
            let p = s.space().geodesic(x, y, t)?;
            let r = s.residual(&p);
            s.evaluations += 1;
            s.offer(&p, r);
            Ok(r)
        };
        let (mut a, mut b) = (0.0f64, 1.0f64);
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let mut fc = eval(self, c)?;
        let mut fd = eval(self, d)?;
        for _ in 0..64 {
            if fc.min(fd) <= eps {
                break;
            }
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = eval(self, c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = eval(self, d)?;
            }
        }
        Ok(())
    }
}

/// Searches for a common point of any number of bodies, reducing families
/// larger than `arity + 1` by intersecting with the last body.
pub fn solve_general(problem: &Problem, opts: &SolveOptions) -> Result<WitnessReport> {
    opts.validate()?;
    problem.validate(opts.witness_tolerance)?;
    let m = problem.body_count();
    let h = problem.arity;
    if m <= h {
        let full: Vec<usize> = (0..m).collect();
        let point = problem.witnesses[&full].clone();
        let residual = problem.residual(&point);
        return Ok(WitnessReport {
            status: if residual <= opts.eps { Status::Found } else { Status::BestEffort },
            point,
            residual,
            depth: 0,
            evaluations: 0,
            trace: Vec::new(),
            cell_point: None,
            failed_subset: None,
        });
    }
    if m == h + 1 {
        return solve(problem, opts);
    }

    let mut reducer = Reducer {
        problem,
        opts,
        sub_opts: SolveOptions {
            witness_tolerance: opts.witness_tolerance.max(opts.eps),
            ..opts.clone()
        },
        memo: problem
            .witnesses
            .iter()
            .map(|(k, w)| (k.iter().fold(0u64, |acc, &i| acc | (1 << i)), w.clone()))
            .collect(),
        evaluations: 0,
        depth: 0,
        last: None,
    };
    let family: Vec<(u64, ConvexBody)> = problem
        .bodies
        .iter()
        .enumerate()
        .map(|(i, b)| (1u64 << i, b.clone()))
        .collect();
    match reducer.find(&family)? {
        Ok(point) => {
            let residual = problem.residual(&point);
            let trace = reducer.last.map(|r| r.trace).unwrap_or_default();
            Ok(WitnessReport {
                status: if residual <= opts.eps { Status::Found } else { Status::BestEffort },
                point,
                residual,
                depth: reducer.depth,
                evaluations: reducer.evaluations,
                trace,
                cell_point: None,
                failed_subset: None,
            })
        }
        Err((mut report, subset)) => {
            report.residual = problem.residual(&report.point);
            report.status = Status::BestEffort;
            report.depth = reducer.depth;
            report.evaluations = reducer.evaluations;
            report.failed_subset = Some(subset);
            Ok(report)
        }
    }
}

type Found = std::result::Result<ModelPoint, (WitnessReport, Vec<usize>)>;

struct Reducer<'a> {
    problem: &'a Problem,
    opts: &'a SolveOptions,
    sub_opts: SolveOptions,
    // common points keyed by the set of original bodies they lie in
    memo: HashMap<u64, ModelPoint>,
    evaluations: u64,
    depth: u32,
    last: Option<WitnessReport>,
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask & (1 << i) != 0).collect()
}

impl Reducer<'_> {
    fn find(&mut self, family: &[(u64, ConvexBody)]) -> Result<Found> {
        let union = family.iter().fold(0, |acc, (m, _)| acc | m);
        if let Some(p) = self.memo.get(&union) {
            return Ok(Ok(p.clone()));
        }
        let h = self.problem.arity;
        let r = family.len();
        if r <= h {
            return Err(Error::InternalInvariant(format!(
                "no witness for subfamily {:?}",
                bits(union)
            )));
        }
        if r == h + 1 {
            return self.solve_family(family, union);
        }

        let (last_mask, last_body) = &family[r - 1];
        for subset in subsets(r - 1, h) {
            let mut sub: Vec<(u64, ConvexBody)> = subset.iter().map(|&i| family[i].clone()).collect();
            sub.push((*last_mask, last_body.clone()));
            if let Err(failure) = self.find(&sub)? {
                return Ok(Err(failure));
            }
        }
        let reduced = family[..r - 1]
            .iter()
            .map(|(m, b)| Ok((m | last_mask, self.problem.space.intersect(b, last_body)?)))
            .collect::<Result<Vec<_>>>()?;
        self.find(&reduced)
    }

    fn solve_family(&mut self, family: &[(u64, ConvexBody)], union: u64) -> Result<Found> {
        let r = family.len();
        let mut witnesses = BTreeMap::new();
        for skip in 0..r {
            let key = family
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .fold(0, |acc, (_, (m, _))| acc | m);
            let w = self.memo.get(&key).ok_or_else(|| {
                Error::InternalInvariant(format!("no witness for subfamily {:?}", bits(key)))
            })?;
            witnesses.insert((0..r).filter(|&i| i != skip).collect::<Vec<_>>(), w.clone());
        }
        let sub = Problem {
            space: self.problem.space.clone(),
            bodies: family.iter().map(|(_, b)| b.clone()).collect(),
            witnesses,
            arity: self.problem.arity,
            bounds: self.problem.bounds.clone(),
        };
        let report = solve(&sub, &self.sub_opts)?;
        self.evaluations += report.evaluations;
        self.depth = self.depth.max(report.depth);
        if report.status == Status::Found && report.residual <= self.opts.eps {
            self.memo.insert(union, report.point.clone());
            let point = report.point.clone();
            self.last = Some(report);
            Ok(Ok(point))
        } else {
            Ok(Err((report, bits(union))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{Ball, EuclideanBody, TreeEdge, TreePoint};

    fn tripod() -> (SpaceModel, Vec<ConvexBody>, ModelPoint) {
        let tree = crate::spaces::MetricTree::new(
            4,
            vec![
                TreeEdge { a: 0, b: 1, weight: 1.0 },
                TreeEdge { a: 0, b: 2, weight: 1.0 },
                TreeEdge { a: 0, b: 3, weight: 1.0 },
            ],
        )
        .unwrap();
        let space = SpaceModel::Tree(tree);
        let center = ModelPoint::Tree(TreePoint::new(0, 0.0));
        let bodies = (0..3)
            .map(|leg| {
                space
                    .tree_hull(&[ModelPoint::Tree(TreePoint::new(leg, 1.0)), center.clone()])
                    .unwrap()
            })
            .collect();
        (space, bodies, center)
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 3).len(), 4);
        assert_eq!(subsets(5, 2)[0], vec![0, 1]);
        assert_eq!(subsets(2, 3).len(), 0);
    }

    #[test]
    fn identical_bodies_found_immediately() {
        let space = SpaceModel::euclidean(2).unwrap();
        let disk = ConvexBody::Euclidean(EuclideanBody::new(vec![], vec![Ball::new(vec![1.0, 1.0], 0.5).unwrap()]));
        let w = ModelPoint::Euclidean(vec![1.2, 0.9]);
        let witnesses = subsets(4, 3).into_iter().map(|s| (s, w.clone())).collect();
        let p = Problem::new(space, vec![disk; 4], witnesses, None);
        let report = solve(&p, &SolveOptions::for_space(&p.space)).unwrap();
        assert_eq!(report.status, Status::Found);
        assert_eq!(report.residual, 0.0);
        assert_eq!(report.depth, 1);
    }

    #[test]
    fn tripod_center() {
        let (space, bodies, center) = tripod();
        let witnesses = subsets(3, 2).into_iter().map(|s| (s, center.clone())).collect();
        let p = Problem::new(space, bodies, witnesses, Some(SearchRegion::WholeTree));
        let report = solve(&p, &SolveOptions::for_space(&p.space)).unwrap();
        assert_eq!(report.status, Status::Found);
        assert_eq!(report.residual, 0.0);
        assert_eq!(report.point, center);
    }

    #[test]
    fn general_with_few_bodies_returns_witness() {
        let (space, bodies, center) = tripod();
        let p = Problem::new(space, bodies[..2].to_vec(), BTreeMap::from([(vec![0, 1], center.clone())]), None);
        let report = solve_general(&p, &SolveOptions::for_space(&p.space)).unwrap();
        assert_eq!(report.point, center);
        assert_eq!(report.status, Status::Found);
    }

    #[test]
    fn solve_rejects_wrong_family_size() {
        let (space, bodies, center) = tripod();
        let p = Problem::new(space, bodies[..2].to_vec(), BTreeMap::from([(vec![0, 1], center)]), None);
        assert!(matches!(
            solve(&p, &SolveOptions::for_space(&p.space)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn invalid_witness_is_a_hypothesis_error() {
        let (space, bodies, center) = tripod();
        let mut witnesses: BTreeMap<_, _> = subsets(3, 2).into_iter().map(|s| (s, center.clone())).collect();
        witnesses.insert(vec![0, 1], ModelPoint::Tree(TreePoint::new(2, 1.0)));
        let p = Problem::new(space, bodies, witnesses, None);
        assert!(matches!(
            solve(&p, &SolveOptions::for_space(&p.space)),
            Err(Error::InvalidWitness { .. })
        ));
    }

    #[test]
    fn options_validation() {
        let s = SpaceModel::Hyperbolic;
        let o = SolveOptions::for_space(&s);
        assert_eq!(o.eps, 1e-5);
        assert!(o.clone().with_max_resolution(48).validate().is_err());
        assert!(o.with_eps(0.0).validate().is_err());
    }
}
