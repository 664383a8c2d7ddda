//! Euclidean space `R^n` with bodies cut out by closed halfspaces and balls.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Closed halfspace `{ x : normal · x <= offset }` with a unit normal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    normal: Vec<f64>,
    offset: f64,
}

impl Halfspace {
    /// Normalizes `normal` (and scales `offset` with it).
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let len = norm(&normal);
        if !(len > 0.0 && len.is_finite() && offset.is_finite()) {
            return Err(invalid("halfspace needs a nonzero finite normal and finite offset"));
        }
        Ok(Self {
            normal: normal.iter().map(|a| a / len).collect(),
            offset: offset / len,
        })
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Signed distance, positive outside.
    pub fn signed_excess(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let excess = self.signed_excess(x);
        if excess <= 0.0 {
            return x.to_vec();
        }
        x.iter().zip(&self.normal).map(|(a, n)| a - excess * n).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    center: Vec<f64>,
    radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) || center.iter().any(|c| !c.is_finite()) {
            return Err(invalid("ball needs a finite center and nonnegative radius"));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn signed_excess(&self, x: &[f64]) -> f64 {
        dist(&self.center, x) - self.radius
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let d = dist(&self.center, x);
        if d <= self.radius {
            return x.to_vec();
        }
        self.center
            .iter()
            .zip(x)
            .map(|(c, a)| c + (a - c) * self.radius / d)
            .collect()
    }
}

/// Intersection of finitely many halfspaces and balls. Empty lists describe
/// the whole space.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EuclideanBody {
    pub halfspaces: Vec<Halfspace>,
    pub balls: Vec<Ball>,
}

impl EuclideanBody {
    pub fn new(halfspaces: Vec<Halfspace>, balls: Vec<Ball>) -> Self {
        Self { halfspaces, balls }
    }

    /// Largest positive constraint excess; zero exactly on the body.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let h = self.halfspaces.iter().map(|h| h.signed_excess(x));
        let b = self.balls.iter().map(|b| b.signed_excess(x));
        h.chain(b).fold(0.0, f64::max)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.halfspaces.extend(other.halfspaces.iter().cloned());
        out.balls.extend(other.balls.iter().cloned());
        out
    }

    pub fn dimension_ok(&self, n: usize) -> bool {
        self.halfspaces.iter().all(|h| h.normal.len() == n)
            && self.balls.iter().all(|b| b.center.len() == n)
    }

    pub fn constraint_count(&self) -> usize {
        self.halfspaces.len() + self.balls.len()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub(crate) fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (1.0 - t) * x + t * y).collect()
}
