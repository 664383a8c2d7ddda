//! The hyperbolic plane in the Poincaré disk model.
//!
//! Points are stored as Poincaré disk coordinates. Geodesics and half-plane
//! tests go through the hyperboloid model `t^2 - x^2 - y^2 = 1` with the
//! Minkowski form `<a, b> = a0 b0 + a1 b1 - a2 b2`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Points must satisfy `|z| < 1 - BOUNDARY_MARGIN`.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

pub fn validate(z: &[f64; 2]) -> Result<()> {
    let r = (z[0] * z[0] + z[1] * z[1]).sqrt();
    if !(r < 1.0 - BOUNDARY_MARGIN) {
        return Err(invalid(format!("point {z:?} is not inside the open unit disk")));
    }
    Ok(())
}

pub fn lift(z: &[f64; 2]) -> [f64; 3] {
    let r2 = z[0] * z[0] + z[1] * z[1];
    let s = 1.0 / (1.0 - r2);
    [2.0 * z[0] * s, 2.0 * z[1] * s, (1.0 + r2) * s]
}

pub fn project(x: &[f64; 3]) -> [f64; 2] {
    let s = 1.0 / (1.0 + x[2]);
    [x[0] * s, x[1] * s]
}

pub fn minkowski(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

pub fn dist(z: &[f64; 2], w: &[f64; 2]) -> f64 {
    let dx = z[0] - w[0];
    let dy = z[1] - w[1];
    let chord = (dx * dx + dy * dy).sqrt();
    let rz = 1.0 - (z[0] * z[0] + z[1] * z[1]);
    let rw = 1.0 - (w[0] * w[0] + w[1] * w[1]);
    2.0 * (chord / (rz * rw).sqrt()).asinh()
}

/// Point at fraction `t` along the geodesic from `z` to `w`.
pub fn geodesic(z: &[f64; 2], w: &[f64; 2], t: f64) -> [f64; 2] {
    if t <= 0.0 {
        return *z;
    }
    if t >= 1.0 {
        return *w;
    }
    let d = dist(z, w);
    if d < 1e-14 {
        return [(1.0 - t) * z[0] + t * w[0], (1.0 - t) * z[1] + t * w[1]];
    }
    let (x, y) = (lift(z), lift(w));
    let sd = d.sinh();
    let a = ((1.0 - t) * d).sinh() / sd;
    let b = (t * d).sinh() / sd;
    project(&[a * x[0] + b * y[0], a * x[1] + b * y[1], a * x[2] + b * y[2]])
}

pub fn poincare_to_klein(z: &[f64; 2]) -> [f64; 2] {
    let s = 2.0 / (1.0 + z[0] * z[0] + z[1] * z[1]);
    [z[0] * s, z[1] * s]
}

pub fn klein_to_poincare(k: &[f64; 2]) -> [f64; 2] {
    let s = 1.0 / (1.0 + (1.0 - k[0] * k[0] - k[1] * k[1]).max(0.0).sqrt());
    [k[0] * s, k[1] * s]
}

/// Closed half-plane bounded by a geodesic.
///
/// In Klein coordinates geodesics are straight chords, so the half-plane is
/// `{ k : n · k <= c }` with `|c| < |n|`. Internally this is the unit spacelike
/// Minkowski normal `(n, c) / sqrt(|n|^2 - c^2)`; `<normal, X>` is then the sinh
/// of the signed distance from `X` to the boundary geodesic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    normal: [f64; 3],
}

impl HalfPlane {
    pub fn from_klein(n: [f64; 2], c: f64) -> Result<Self> {
        let q = n[0] * n[0] + n[1] * n[1] - c * c;
        if !(q > 0.0 && q.is_finite()) {
            return Err(invalid(format!(
                "Klein chord {n:?} · k = {c} does not cross the disk"
            )));
        }
        let s = 1.0 / q.sqrt();
        Ok(Self {
            normal: [n[0] * s, n[1] * s, c * s],
        })
    }

    /// The half-plane to the left of the directed geodesic through `p` then `q`.
    pub fn left_of(p: &[f64; 2], q: &[f64; 2]) -> Result<Self> {
        let (a, b) = (poincare_to_klein(p), poincare_to_klein(q));
        let dir = [b[0] - a[0], b[1] - a[1]];
        // right-pointing normal of the chord direction
        let n = [dir[1], -dir[0]];
        Self::from_klein(n, n[0] * a[0] + n[1] * a[1])
    }

    /// `(n, c)` of the Klein chord description.
    pub fn klein(&self) -> ([f64; 2], f64) {
        ([self.normal[0], self.normal[1]], self.normal[2])
    }

    pub fn signed_excess(&self, z: &[f64; 2]) -> f64 {
        minkowski(&self.normal, &lift(z)).asinh()
    }
}

/// Closed hyperbolic ball; the center is in disk coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicBall {
    center: [f64; 2],
    radius: f64,
}

impl HyperbolicBall {
    pub fn new(center: [f64; 2], radius: f64) -> Result<Self> {
        validate(&center)?;
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(invalid("hyperbolic ball radius must be nonnegative"));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn signed_excess(&self, z: &[f64; 2]) -> f64 {
        dist(&self.center, z) - self.radius
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicBody {
    pub halfplanes: Vec<HalfPlane>,
    pub balls: Vec<HyperbolicBall>,
}

impl HyperbolicBody {
    pub fn new(halfplanes: Vec<HalfPlane>, balls: Vec<HyperbolicBall>) -> Self {
        Self { halfplanes, balls }
    }

    pub fn violation(&self, z: &[f64; 2]) -> f64 {
        let h = self.halfplanes.iter().map(|h| h.signed_excess(z));
        let b = self.balls.iter().map(|b| b.signed_excess(z));
        h.chain(b).fold(0.0, f64::max)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.halfplanes.extend(other.halfplanes.iter().cloned());
        out.balls.extend(other.balls.iter().cloned());
        out
    }
}
