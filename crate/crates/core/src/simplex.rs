//! Combinatorics of the standard simplex.
//!
//! The standard `d`-simplex is the set of barycentric weight vectors of length
//! `d + 1`. Vertex `e_i` carries all its weight on coordinate `i`, the facet
//! `F_i` is the face opposite `e_i` (coordinate `i` equals zero), and for an
//! index set `I` the face `Δ_I` holds the points whose support lies in `I`.
//! Indices and labels are zero-based throughout.
//!
//! Subdivision uses the Kuhn (Freudenthal) triangulation at integer resolution
//! `k`: grid vertices are barycentric points with coordinates in
//! `{0, 1/k, ..., 1}`, stored as exact integer numerators, and the simplex is
//! tiled by `k^d` congruent cells. Doubling `k` refines every cell into `2^d`
//! cells of the finer grid.

use std::collections::HashMap;

use crate::error::{invalid, Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;

/// A point of the standard simplex in barycentric coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct BarycentricPoint {
    coords: Vec<f64>,
}

impl BarycentricPoint {
    /// Validates nonnegativity and that the weights sum to one.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("barycentric point needs at least one coordinate"));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(invalid(format!("barycentric coordinate {c} is negative or not finite")));
        }
        let sum: f64 = coords.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(invalid(format!("barycentric coordinates sum to {sum}, expected 1")));
        }
        Ok(Self { coords })
    }

    /// The vertex `e_i` of the `dim`-simplex.
    pub fn vertex(dim: usize, i: usize) -> Self {
        assert!(i <= dim, "vertex index {i} out of range for dimension {dim}");
        let mut coords = vec![0.0; dim + 1];
        coords[i] = 1.0;
        Self { coords }
    }

    /// The barycenter of the face spanned by `index_set`.
    pub fn face_barycenter(dim: usize, index_set: &[usize]) -> Result<Self> {
        if index_set.is_empty() {
            return Err(invalid("face index set must be nonempty"));
        }
        let mut coords = vec![0.0; dim + 1];
        for &i in index_set {
            if i > dim {
                return Err(invalid(format!("index {i} out of range for dimension {dim}")));
            }
            coords[i] = 1.0;
        }
        let size = coords.iter().filter(|c| **c > 0.0).count() as f64;
        coords.iter_mut().for_each(|c| *c /= size);
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Simplex dimension `d` (one less than the number of coordinates).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coords.len()).filter(|&i| self.coords[i] > 0.0).collect()
    }

    /// Support as a bit mask; bit `i` set iff coordinate `i` is positive.
    pub fn support_mask(&self) -> u64 {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0.0)
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    /// True when the point lies on the facet opposite vertex `i`.
    pub fn on_facet(&self, i: usize) -> bool {
        self.coords[i] == 0.0
    }

    pub fn l1_dist(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

/// Dimension and resolution of a Kuhn subdivision of the standard simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridSpec {
    dim: usize,
    resolution: u32,
}

impl GridSpec {
    pub fn new(dim: usize, resolution: u32) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("simplex dimension must be at least 1"));
        }
        if dim >= 63 {
            return Err(invalid(format!("simplex dimension {dim} is too large")));
        }
        if resolution == 0 {
            return Err(invalid("grid resolution must be at least 1"));
        }
        Ok(Self { dim, resolution })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    /// `binomial(k + d, d)`.
    pub fn vertex_count(&self) -> u64 {
        let (k, d) = (self.resolution as u64, self.dim as u64);
        (1..=d).fold(1u64, |acc, i| acc * (k + i) / i)
    }

    /// `k^d`.
    pub fn cell_count(&self) -> u64 {
        (self.resolution as u64).pow(self.dim as u32)
    }
}

/// A grid vertex: integer numerators over the grid resolution, summing to it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridVertex {
    numerators: Vec<u32>,
}

impl GridVertex {
    /// Builds a vertex from numerators; they must sum to `resolution`.
    pub fn new(numerators: Vec<u32>, resolution: u32) -> Result<Self> {
        let sum: u64 = numerators.iter().map(|&a| a as u64).sum();
        if sum != resolution as u64 {
            return Err(invalid(format!(
                "grid numerators {numerators:?} sum to {sum}, expected {resolution}"
            )));
        }
        Ok(Self { numerators })
    }

    pub fn numerators(&self) -> &[u32] {
        &self.numerators
    }

    pub fn support_mask(&self) -> u64 {
        self.numerators
            .iter()
            .enumerate()
            .filter(|(_, a)| **a > 0)
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    pub fn in_support(&self, i: usize) -> bool {
        self.numerators.get(i).is_some_and(|&a| a > 0)
    }

    pub fn to_point(&self, resolution: u32) -> BarycentricPoint {
        let k = resolution as f64;
        BarycentricPoint {
            coords: self.numerators.iter().map(|&a| a as f64 / k).collect(),
        }
    }

    /// The same point on a grid `factor` times finer.
    pub fn rescaled(&self, factor: u32) -> GridVertex {
        GridVertex {
            numerators: self.numerators.iter().map(|a| a * factor).collect(),
        }
    }
}

/// One top-dimensional cell of the Kuhn triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    resolution: u32,
    vertices: Vec<GridVertex>,
}

impl Cell {
    pub fn vertices(&self) -> &[GridVertex] {
        &self.vertices
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    /// Barycenter as exact numerators over `(d + 1) * k`.
    pub fn barycenter_numerators(&self) -> (Vec<u64>, u64) {
        let len = self.vertices[0].numerators.len();
        let mut sum = vec![0u64; len];
        for v in &self.vertices {
            for (s, &a) in sum.iter_mut().zip(&v.numerators) {
                *s += a as u64;
            }
        }
        (sum, self.vertices.len() as u64 * self.resolution as u64)
    }

    pub fn barycenter(&self) -> BarycentricPoint {
        let (nums, den) = self.barycenter_numerators();
        BarycentricPoint {
            coords: nums.iter().map(|&a| a as f64 / den as f64).collect(),
        }
    }

    /// Largest barycentric max-norm distance between two cell vertices.
    pub fn diameter(&self) -> f64 {
        let mut widest = 0u32;
        for (i, u) in self.vertices.iter().enumerate() {
            for v in &self.vertices[i + 1..] {
                for (a, b) in u.numerators.iter().zip(&v.numerators) {
                    widest = widest.max(a.abs_diff(*b));
                }
            }
        }
        widest as f64 / self.resolution as f64
    }
}

/// All grid vertices in lexicographic order of their numerators.
pub fn enumerate_grid(spec: GridSpec) -> Vec<GridVertex> {
    let mut out = Vec::with_capacity(spec.vertex_count() as usize);
    let mut current = vec![0u32; spec.dim + 1];
    compositions(spec.resolution, 0, &mut current, &mut out);
    out
}

fn compositions(remaining: u32, slot: usize, current: &mut Vec<u32>, out: &mut Vec<GridVertex>) {
    if slot + 1 == current.len() {
        current[slot] = remaining;
        out.push(GridVertex {
            numerators: current.clone(),
        });
        return;
    }
    for a in 0..=remaining {
        current[slot] = a;
        compositions(remaining - a, slot + 1, current, out);
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

// Cumulative coordinates: x[j] = a[j+1] + ... + a[d]; the simplex becomes
// { k >= x[0] >= x[1] >= ... >= x[d-1] >= 0 } inside the cube [0, k]^d.
fn to_cumulative(v: &GridVertex) -> Vec<u32> {
    let d = v.numerators.len() - 1;
    let mut x = vec![0u32; d];
    let mut acc = 0;
    for j in (0..d).rev() {
        acc += v.numerators[j + 1];
        x[j] = acc;
    }
    x
}

fn from_cumulative(x: &[u32], k: u32) -> GridVertex {
    let d = x.len();
    let mut a = Vec::with_capacity(d + 1);
    a.push(k - x[0]);
    for j in 1..d {
        a.push(x[j - 1] - x[j]);
    }
    a.push(x[d - 1]);
    GridVertex { numerators: a }
}

fn kuhn_cell(base: &GridVertex, perm: &[usize], k: u32) -> Option<Cell> {
    let mut x = to_cumulative(base);
    let mut vertices = Vec::with_capacity(perm.len() + 1);
    vertices.push(base.clone());
    for &axis in perm {
        x[axis] += 1;
        let in_region = x[0] <= k && x.windows(2).all(|w| w[0] >= w[1]);
        if !in_region {
            return None;
        }
        vertices.push(from_cumulative(&x, k));
    }
    Some(Cell {
        resolution: k,
        vertices,
    })
}

/// Lazily yields the `k^d` Kuhn cells, ordered by base vertex then permutation.
pub fn cells(spec: GridSpec) -> impl Iterator<Item = Cell> {
    let perms = permutations(spec.dim);
    let k = spec.resolution;
    enumerate_grid(spec).into_iter().flat_map(move |base| {
        perms
            .iter()
            .filter_map(|p| kuhn_cell(&base, p, k))
            .collect::<Vec<_>>()
    })
}

pub fn enumerate_cells(spec: GridSpec) -> Vec<Cell> {
    cells(spec).collect()
}

/// Labels for every vertex of one grid.
#[derive(Clone, Debug)]
pub struct Labeling {
    spec: GridSpec,
    labels: HashMap<GridVertex, usize>,
}

impl Labeling {
    pub fn from_fn(spec: GridSpec, mut label: impl FnMut(&GridVertex) -> usize) -> Self {
        let labels = enumerate_grid(spec)
            .into_iter()
            .map(|v| {
                let l = label(&v);
                (v, l)
            })
            .collect();
        Self { spec, labels }
    }

    /// Wraps an explicit map, which must label every grid vertex.
    pub fn from_map(spec: GridSpec, labels: HashMap<GridVertex, usize>) -> Result<Self> {
        if let Some(v) = enumerate_grid(spec).into_iter().find(|v| !labels.contains_key(v)) {
            return Err(invalid(format!("labeling misses grid vertex {:?}", v.numerators)));
        }
        Ok(Self { spec, labels })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn label(&self, v: &GridVertex) -> Option<usize> {
        self.labels.get(v).copied()
    }

    /// Every vertex must carry a label from its own support.
    pub fn check_admissible(&self) -> Result<()> {
        let mut offenders: Vec<_> = self
            .labels
            .iter()
            .filter(|(v, &l)| !v.in_support(l))
            .collect();
        offenders.sort();
        match offenders.first() {
            None => Ok(()),
            Some((v, &label)) => Err(Error::Inadmissible {
                vertex: v.numerators.clone(),
                resolution: self.spec.resolution,
                label,
            }),
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.check_admissible().is_ok()
    }
}

fn is_fully_labeled(cell: &Cell, labeling: &Labeling) -> bool {
    let want = (1u64 << cell.vertices.len()) - 1;
    let seen = cell
        .vertices
        .iter()
        .filter_map(|v| labeling.label(v))
        .fold(0u64, |m, l| if l < 64 { m | (1 << l) } else { m });
    seen == want
}

/// All cells whose vertices carry every label. For an admissible labeling the
/// result has odd length.
pub fn find_fully_labeled(spec: GridSpec, labeling: &Labeling) -> Result<Vec<Cell>> {
    if labeling.spec != spec {
        return Err(invalid("labeling was built for a different grid"));
    }
    labeling.check_admissible()?;
    Ok(cells(spec).filter(|c| is_fully_labeled(c, labeling)).collect())
}

/// A grid-level point near the common intersection of a covering.
#[derive(Clone, Debug)]
pub struct KkmWitness {
    /// A cell whose vertices jointly meet every covering set.
    pub cell: Cell,
    /// The cell barycenter.
    pub point: BarycentricPoint,
}

/// Searches for a cell meeting every set of a covering `{G_i}` with
/// `G_i ∩ F_i = ∅`, tested on grid vertices only.
///
/// `covering(i, v)` reports whether vertex `v` belongs to set `i`.
pub fn kkm_witness(
    spec: GridSpec,
    covering: impl Fn(usize, &GridVertex) -> bool,
) -> Result<KkmWitness> {
    let grid = enumerate_grid(spec);
    let mut labels = HashMap::with_capacity(grid.len());
    for v in grid {
        for i in 0..=spec.dim {
            if !v.in_support(i) && covering(i, &v) {
                return Err(Error::FaceViolation {
                    set: i,
                    vertex: v.numerators.clone(),
                });
            }
        }
        match (0..=spec.dim).find(|&i| covering(i, &v)) {
            Some(i) => {
                labels.insert(v, i);
            }
            None => {
                return Err(Error::Uncovered {
                    vertex: v.numerators.clone(),
                })
            }
        }
    }
    let labeling = Labeling { spec, labels };
    let cell = find_fully_labeled(spec, &labeling)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::InternalInvariant("admissible labeling without a fully-labeled cell".into()))?;
    let point = cell.barycenter();
    Ok(KkmWitness { cell, point })
}
