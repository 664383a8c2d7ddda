//! Metric trees: finite trees with positive edge lengths and the path metric.
//!
//! A point is an `(edge, offset)` pair, the offset measured from the edge's
//! first endpoint. Tree vertices are canonicalized to the incident edge of
//! smallest id so every point has exactly one representation.
//!
//! A convex body (subtree) is stored as one closed interval per edge. The
//! intervals are kept closed under shared vertices: whenever the body contains
//! a vertex, every incident edge carries at least that endpoint. This makes
//! edge-wise interval intersection exact.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreePoint {
    pub edge: usize,
    pub offset: f64,
}

impl TreePoint {
    pub fn new(edge: usize, offset: f64) -> Self {
        Self { edge, offset }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricTree {
    vertex_count: usize,
    edges: Vec<TreeEdge>,
    incident: Vec<Vec<usize>>,
    // row-major all-pairs vertex distances
    vertex_dist: Vec<f64>,
    // parent (vertex, edge) toward vertex 0, plus hop depth
    parent: Vec<Option<(usize, usize)>>,
    hops: Vec<usize>,
}

impl MetricTree {
    pub fn new(vertex_count: usize, edges: Vec<TreeEdge>) -> Result<Self> {
        if vertex_count < 2 {
            return Err(invalid("a metric tree needs at least two vertices"));
        }
        if edges.len() != vertex_count - 1 {
            return Err(invalid(format!(
                "a tree on {vertex_count} vertices has {} edges, got {}",
                vertex_count - 1,
                edges.len()
            )));
        }
        let mut incident = vec![Vec::new(); vertex_count];
        for (id, e) in edges.iter().enumerate() {
            if e.a >= vertex_count || e.b >= vertex_count || e.a == e.b {
                return Err(invalid(format!("edge {id} has invalid endpoints ({}, {})", e.a, e.b)));
            }
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return Err(invalid(format!("edge {id} has non-positive weight {}", e.weight)));
            }
            incident[e.a].push(id);
            incident[e.b].push(id);
        }

        let mut parent = vec![None; vertex_count];
        let mut hops = vec![0; vertex_count];
        let mut seen = vec![false; vertex_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &e in &incident[u] {
                let v = other_end(&edges[e], u);
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, e));
                    hops[v] = hops[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(invalid("tree edges do not connect all vertices"));
        }

        let mut vertex_dist = vec![0.0; vertex_count * vertex_count];
        for src in 0..vertex_count {
            let row = &mut vertex_dist[src * vertex_count..(src + 1) * vertex_count];
            let mut visited = vec![false; vertex_count];
            let mut stack = vec![src];
            visited[src] = true;
            while let Some(u) = stack.pop() {
                for &e in &incident[u] {
                    let v = other_end(&edges[e], u);
                    if !visited[v] {
                        visited[v] = true;
                        row[v] = row[u] + edges[e].weight;
                        stack.push(v);
                    }
                }
            }
        }

        Ok(Self {
            vertex_count,
            edges,
            incident,
            vertex_dist,
            parent,
            hops,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn vertex_distance(&self, u: usize, v: usize) -> f64 {
        self.vertex_dist[u * self.vertex_count + v]
    }

    pub fn validate(&self, p: &TreePoint) -> Result<()> {
        let e = self
            .edges
            .get(p.edge)
            .ok_or_else(|| invalid(format!("edge {} does not exist", p.edge)))?;
        if !(p.offset >= 0.0 && p.offset <= e.weight) {
            return Err(invalid(format!(
                "offset {} outside edge {} of length {}",
                p.offset, p.edge, e.weight
            )));
        }
        Ok(())
    }

    pub fn vertex_point(&self, v: usize) -> TreePoint {
        let edge = *self.incident[v].iter().min().expect("connected tree vertex has an edge");
        let e = &self.edges[edge];
        let offset = if e.a == v { 0.0 } else { e.weight };
        TreePoint { edge, offset }
    }

    /// Clamps the offset into the edge and maps endpoints to the vertex form.
    pub fn canonical(&self, p: TreePoint) -> TreePoint {
        let e = &self.edges[p.edge];
        if p.offset <= 0.0 {
            self.vertex_point(e.a)
        } else if p.offset >= e.weight {
            self.vertex_point(e.b)
        } else {
            p
        }
    }

    /// The vertex a point sits on, if any.
    pub fn as_vertex(&self, p: &TreePoint) -> Option<usize> {
        let e = &self.edges[p.edge];
        if p.offset == 0.0 {
            Some(e.a)
        } else if p.offset == e.weight {
            Some(e.b)
        } else {
            None
        }
    }

    fn to_vertex(&self, p: &TreePoint, v: usize) -> f64 {
        let e = &self.edges[p.edge];
        (p.offset + self.vertex_distance(e.a, v))
            .min(e.weight - p.offset + self.vertex_distance(e.b, v))
    }

    /// Endpoint pair `(exit of p's edge, entry of q's edge)` on the p–q path.
    fn exits(&self, p: &TreePoint, q: &TreePoint) -> (usize, usize, f64) {
        let ep = &self.edges[p.edge];
        let eq = &self.edges[q.edge];
        let mut best = (ep.a, eq.a, f64::INFINITY);
        for (u, du) in [(ep.a, p.offset), (ep.b, ep.weight - p.offset)] {
            for (v, dv) in [(eq.a, q.offset), (eq.b, eq.weight - q.offset)] {
                let total = du + self.vertex_distance(u, v) + dv;
                if total < best.2 {
                    best = (u, v, total);
                }
            }
        }
        best
    }

    pub fn dist(&self, p: &TreePoint, q: &TreePoint) -> f64 {
        if p.edge == q.edge {
            return (p.offset - q.offset).abs();
        }
        self.exits(p, q).2
    }

    /// Edges along the vertex path from `u` to `v`, as `(edge, from, to)`.
    pub fn vertex_path(&self, u: usize, v: usize) -> Vec<(usize, usize, usize)> {
        let (mut a, mut b) = (u, v);
        let mut head = Vec::new();
        let mut tail = Vec::new();
        while self.hops[a] > self.hops[b] {
            let (pa, e) = self.parent[a].unwrap();
            head.push((e, a, pa));
            a = pa;
        }
        while self.hops[b] > self.hops[a] {
            let (pb, e) = self.parent[b].unwrap();
            tail.push((e, pb, b));
            b = pb;
        }
        while a != b {
            let (pa, ea) = self.parent[a].unwrap();
            let (pb, eb) = self.parent[b].unwrap();
            head.push((ea, a, pa));
            tail.push((eb, pb, b));
            a = pa;
            b = pb;
        }
        tail.reverse();
        head.extend(tail);
        head
    }

    fn toward(&self, edge: usize, from_offset: f64, toward_vertex: usize, len: f64) -> TreePoint {
        let e = &self.edges[edge];
        let offset = if toward_vertex == e.a {
            from_offset - len
        } else {
            from_offset + len
        };
        self.canonical(TreePoint {
            edge,
            offset: offset.clamp(0.0, e.weight),
        })
    }

    /// Point at fraction `t` of the way from `p` to `q`.
    pub fn geodesic(&self, p: &TreePoint, q: &TreePoint, t: f64) -> TreePoint {
        if t <= 0.0 {
            return *p;
        }
        if t >= 1.0 {
            return *q;
        }
        if p.edge == q.edge {
            let offset = (1.0 - t) * p.offset + t * q.offset;
            return self.canonical(TreePoint { edge: p.edge, offset });
        }
        let (u, v, total) = self.exits(p, q);
        let mut remaining = t * total;

        let first = self.to_vertex_along_edge(p, u);
        if remaining <= first {
            return self.toward(p.edge, p.offset, u, remaining);
        }
        remaining -= first;
        for (edge, from, to) in self.vertex_path(u, v) {
            let w = self.edges[edge].weight;
            if remaining <= w {
                let start = if self.edges[edge].a == from { 0.0 } else { w };
                return self.toward(edge, start, to, remaining);
            }
            remaining -= w;
        }
        let eq = &self.edges[q.edge];
        let start = if eq.a == v { 0.0 } else { eq.weight };
        let toward = if eq.a == v { eq.b } else { eq.a };
        let last = (q.offset - start).abs();
        self.toward(q.edge, start, toward, remaining.min(last))
    }

    fn to_vertex_along_edge(&self, p: &TreePoint, v: usize) -> f64 {
        let e = &self.edges[p.edge];
        if e.a == v {
            p.offset
        } else {
            e.weight - p.offset
        }
    }

    /// Smallest subtree containing every marker.
    pub fn hull(&self, markers: &[TreePoint]) -> Result<TreeBody> {
        let (first, rest) = markers
            .split_first()
            .ok_or_else(|| invalid("tree hull needs at least one marker"))?;
        for m in markers {
            self.validate(m)?;
        }
        let mut body = TreeBody::empty(self.edges.len());
        body.add_piece(first.edge, first.offset, first.offset);
        for q in rest {
            self.add_path(&mut body, first, q);
        }
        self.close(&mut body);
        Ok(body)
    }

    fn add_path(&self, body: &mut TreeBody, p: &TreePoint, q: &TreePoint) {
        if p.edge == q.edge {
            body.add_piece(p.edge, p.offset.min(q.offset), p.offset.max(q.offset));
            return;
        }
        let (u, v, _) = self.exits(p, q);
        for (pt, end) in [(p, u), (q, v)] {
            let e = &self.edges[pt.edge];
            if e.a == end {
                body.add_piece(pt.edge, 0.0, pt.offset);
            } else {
                body.add_piece(pt.edge, pt.offset, e.weight);
            }
        }
        for (edge, _, _) in self.vertex_path(u, v) {
            body.add_piece(edge, 0.0, self.edges[edge].weight);
        }
    }

    fn close(&self, body: &mut TreeBody) {
        let mut covered = Vec::new();
        for (id, piece) in body.pieces.iter().enumerate() {
            if let Some((lo, hi)) = piece {
                let e = &self.edges[id];
                if *lo == 0.0 {
                    covered.push(e.a);
                }
                if *hi == e.weight {
                    covered.push(e.b);
                }
            }
        }
        for v in covered {
            for &id in &self.incident[v] {
                let e = &self.edges[id];
                let end = if e.a == v { 0.0 } else { e.weight };
                body.add_piece(id, end, end);
            }
        }
    }

    /// Path distance from `p` to the subtree; infinite for an empty body.
    pub fn violation(&self, body: &TreeBody, p: &TreePoint) -> f64 {
        let mut best = f64::INFINITY;
        for (id, piece) in body.pieces.iter().enumerate() {
            let Some((lo, hi)) = *piece else { continue };
            let d = if id == p.edge {
                if p.offset < lo {
                    lo - p.offset
                } else if p.offset > hi {
                    p.offset - hi
                } else {
                    0.0
                }
            } else {
                let e = &self.edges[id];
                (self.to_vertex(p, e.a) + lo).min(self.to_vertex(p, e.b) + e.weight - hi)
            };
            best = best.min(d);
            if best == 0.0 {
                break;
            }
        }
        best
    }

    pub fn intersect(&self, a: &TreeBody, b: &TreeBody) -> TreeBody {
        let pieces = a
            .pieces
            .iter()
            .zip(&b.pieces)
            .map(|(x, y)| match (x, y) {
                (Some((l1, h1)), Some((l2, h2))) => {
                    let (lo, hi) = (l1.max(*l2), h1.min(*h2));
                    (lo <= hi).then_some((lo, hi))
                }
                _ => None,
            })
            .collect();
        TreeBody { pieces }
    }

    /// The `radius`-neighborhood of a subtree, itself a subtree.
    pub fn thicken(&self, body: &TreeBody, radius: f64) -> TreeBody {
        let mut out = TreeBody::empty(self.edges.len());
        for (id, e) in self.edges.iter().enumerate() {
            let da = self.violation(body, &TreePoint::new(id, 0.0));
            let db = self.violation(body, &TreePoint::new(id, e.weight));
            if let Some((lo, hi)) = body.pieces[id] {
                out.add_piece(id, (lo - radius).max(0.0), (hi + radius).min(e.weight));
            }
            if da <= radius {
                out.add_piece(id, 0.0, (radius - da).min(e.weight));
            }
            if db <= radius {
                out.add_piece(id, (e.weight - (radius - db)).max(0.0), e.weight);
            }
        }
        self.close(&mut out);
        out
    }
}

fn other_end(e: &TreeEdge, v: usize) -> usize {
    if e.a == v {
        e.b
    } else {
        e.a
    }
}

/// A closed subtree, one optional interval `[lo, hi]` per edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeBody {
    pieces: Vec<Option<(f64, f64)>>,
}

impl TreeBody {
    fn empty(edge_count: usize) -> Self {
        Self {
            pieces: vec![None; edge_count],
        }
    }

    /// The whole tree.
    pub fn full(tree: &MetricTree) -> Self {
        Self {
            pieces: tree.edges.iter().map(|e| Some((0.0, e.weight))).collect(),
        }
    }

    fn add_piece(&mut self, edge: usize, lo: f64, hi: f64) {
        let slot = &mut self.pieces[edge];
        *slot = Some(match *slot {
            None => (lo, hi),
            Some((l, h)) => (l.min(lo), h.max(hi)),
        });
    }

    pub fn pieces(&self) -> &[Option<(f64, f64)>] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.iter().all(|p| p.is_none())
    }

    /// Total edge length covered.
    pub fn length(&self) -> f64 {
        self.pieces.iter().flatten().map(|(lo, hi)| hi - lo).sum()
    }
}
