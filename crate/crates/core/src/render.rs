//! SVG pictures of planar and tree instances.
//!
//! Euclidean bodies in the plane are drawn as clipped polygons (balls become
//! inscribed 96-gons). Hyperbolic bodies are clipped in Klein coordinates,
//! where geodesics are straight, then densified and mapped to the Poincaré
//! disk. Trees use a layered layout with edge length along the x axis and every
//! body drawn as an offset colored stroke along its pieces.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::solver::{Problem, SearchRegion};
use crate::spaces::hyperbolic::{klein_to_poincare, poincare_to_klein};
use crate::spaces::{ConvexBody, MetricTree, ModelPoint, SpaceModel, TreePoint};

const SIZE: f64 = 600.0;
const PAD: f64 = 20.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];
const CIRCLE_SIDES: usize = 96;

type P2 = [f64; 2];

/// Bodies, witnesses and an optional highlighted point. Available for
/// `euclidean(2)`, the hyperbolic plane and trees.
pub fn render_svg(problem: &Problem, point: Option<&ModelPoint>) -> Result<String> {
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    match &problem.space {
        SpaceModel::Euclidean { n: 2 } => euclidean(&mut svg, problem, point),
        SpaceModel::Hyperbolic => hyperbolic(&mut svg, problem, point),
        SpaceModel::Tree(t) => tree(&mut svg, t, problem, point),
        SpaceModel::Euclidean { n } => {
            return Err(Error::Unsupported(format!("cannot render euclidean({n}) instances")))
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

struct View {
    lo: P2,
    scale: f64,
}

impl View {
    fn fit(lo: P2, hi: P2) -> Self {
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        View {
            lo,
            scale: (SIZE - 2.0 * PAD) / span,
        }
    }

    fn px(&self, p: P2) -> P2 {
        [
            PAD + (p[0] - self.lo[0]) * self.scale,
            SIZE - PAD - (p[1] - self.lo[1]) * self.scale,
        ]
    }
}

// Sutherland-Hodgman against `a · x <= c`.
fn clip(poly: &[P2], a: P2, c: f64) -> Vec<P2> {
    let inside = |p: &P2| a[0] * p[0] + a[1] * p[1] <= c;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fp, fq) = (a[0] * p[0] + a[1] * p[1] - c, a[0] * q[0] + a[1] * q[1] - c);
        if inside(&p) {
            out.push(p);
        }
        if (fp <= 0.0) != (fq <= 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

fn clip_convex(mut poly: Vec<P2>, by: &[P2]) -> Vec<P2> {
    // `by` is counterclockwise, so its interior lies left of every edge
    for i in 0..by.len() {
        let (p, q) = (by[i], by[(i + 1) % by.len()]);
        let a = [q[1] - p[1], p[0] - q[0]];
        poly = clip(&poly, a, a[0] * p[0] + a[1] * p[1]);
        if poly.is_empty() {
            break;
        }
    }
    poly
}

fn circle(center: P2, r: f64) -> Vec<P2> {
    (0..CIRCLE_SIDES)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / CIRCLE_SIDES as f64;
            [center[0] + r * a.cos(), center[1] + r * a.sin()]
        })
        .collect()
}

fn polygon(svg: &mut String, view: &View, poly: &[P2], color: &str) {
    if poly.len() < 2 {
        return;
    }
    let pts: Vec<String> = poly
        .iter()
        .map(|p| {
            let q = view.px(*p);
            format!("{:.2},{:.2}", q[0], q[1])
        })
        .collect();
    writeln!(
        svg,
        r#"<polygon points="{}" fill="{color}" fill-opacity="0.2" stroke="{color}" stroke-width="1.5"/>"#,
        pts.join(" ")
    )
    .unwrap();
}

fn dot(svg: &mut String, q: P2, r: f64, color: &str) {
    writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="{color}"/>"#, q[0], q[1]).unwrap();
}

fn marks(svg: &mut String, problem: &Problem, point: Option<&ModelPoint>, place: impl Fn(&ModelPoint) -> P2) {
    for w in problem.witnesses.values() {
        dot(svg, place(w), 3.0, "black");
    }
    if let Some(p) = point {
        let q = place(p);
        dot(svg, q, 6.0, "red");
        dot(svg, q, 2.5, "white");
    }
}

fn euclidean(svg: &mut String, problem: &Problem, point: Option<&ModelPoint>) {
    let xy = |p: &ModelPoint| match p {
        ModelPoint::Euclidean(v) => [v[0], v[1]],
        _ => [0.0, 0.0],
    };
    let (lo, hi) = match &problem.bounds {
        Some(SearchRegion::Box { lo, hi }) => ([lo[0], lo[1]], [hi[0], hi[1]]),
        _ => {
            let pts: Vec<P2> = problem.witnesses.values().chain(point).map(xy).collect();
            let f = |j: usize, min: bool| {
                let it = pts.iter().map(|p| p[j]);
                if min {
                    it.fold(0.0, f64::min) - 1.0
                } else {
                    it.fold(0.0, f64::max) + 1.0
                }
            };
            ([f(0, true), f(1, true)], [f(0, false), f(1, false)])
        }
    };
    let view = View::fit(lo, hi);
    let frame = vec![lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]];
    for (i, body) in problem.bodies.iter().enumerate() {
        let ConvexBody::Euclidean(b) = body else { continue };
        let mut poly = frame.clone();
        for h in &b.halfspaces {
            poly = clip(&poly, [h.normal()[0], h.normal()[1]], h.offset());
        }
        for ball in &b.balls {
            poly = clip_convex(poly, &circle([ball.center()[0], ball.center()[1]], ball.radius()));
        }
        polygon(svg, &view, &poly, PALETTE[i % PALETTE.len()]);
    }
    marks(svg, problem, point, |p| view.px(xy(p)));
}

// Points at hyperbolic distance r from c, through a Möbius map of the circle of
// radius tanh(r / 2) about the origin.
fn hyperbolic_circle(c: P2, r: f64) -> Vec<P2> {
    let rho = (r / 2.0).tanh().min(1.0 - 1e-9);
    circle([0.0, 0.0], rho)
        .into_iter()
        .map(|z| {
            // (z + c) / (1 + conj(c) z)
            let num = [z[0] + c[0], z[1] + c[1]];
            let den = [1.0 + c[0] * z[0] + c[1] * z[1], c[0] * z[1] - c[1] * z[0]];
            let d = den[0] * den[0] + den[1] * den[1];
            [
                (num[0] * den[0] + num[1] * den[1]) / d,
                (num[1] * den[0] - num[0] * den[1]) / d,
            ]
        })
        .collect()
}

fn hyperbolic(svg: &mut String, problem: &Problem, point: Option<&ModelPoint>) {
    let view = View::fit([-1.0, -1.0], [1.0, 1.0]);
    let center = view.px([0.0, 0.0]);
    writeln!(
        svg,
        r#"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="gray"/>"#,
        center[0],
        center[1],
        view.scale
    )
    .unwrap();
    for (i, body) in problem.bodies.iter().enumerate() {
        let ConvexBody::Hyperbolic(b) = body else { continue };
        let mut poly = circle([0.0, 0.0], 0.999);
        for h in &b.halfplanes {
            let (n, c) = h.klein();
            poly = clip(&poly, n, c);
        }
        for ball in &b.balls {
            let rim: Vec<P2> = hyperbolic_circle(ball.center(), ball.radius())
                .iter()
                .map(poincare_to_klein)
                .collect();
            poly = clip_convex(poly, &rim);
        }
        let mut dense = Vec::new();
        for j in 0..poly.len() {
            let (p, q) = (poly[j], poly[(j + 1) % poly.len()]);
            for s in 0..16 {
                let t = s as f64 / 16.0;
                dense.push(klein_to_poincare(&[p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]));
            }
        }
        polygon(svg, &view, &dense, PALETTE[i % PALETTE.len()]);
    }
    marks(svg, problem, point, |p| match p {
        ModelPoint::Hyperbolic(z) => view.px(*z),
        _ => center,
    });
}

// Vertex positions: x is the distance from vertex 0, y the leaf order.
fn tree_layout(t: &MetricTree) -> Vec<P2> {
    let n = t.vertex_count();
    let mut children = vec![Vec::new(); n];
    let mut depth = vec![0.0; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &e in t.incident_edges(v) {
            let edge = t.edges()[e];
            let u = if edge.a == v { edge.b } else { edge.a };
            if !seen[u] {
                seen[u] = true;
                depth[u] = depth[v] + edge.weight;
                children[v].push(u);
                queue.push_back(u);
            }
        }
    }
    let mut y = vec![0.0; n];
    let mut next = 0.0;
    fn place(v: usize, children: &[Vec<usize>], y: &mut [f64], next: &mut f64) {
        if children[v].is_empty() {
            y[v] = *next;
            *next += 1.0;
            return;
        }
        for &c in &children[v] {
            place(c, children, y, next);
        }
        y[v] = children[v].iter().map(|&c| y[c]).sum::<f64>() / children[v].len() as f64;
    }
    place(0, &children, &mut y, &mut next);
    (0..n).map(|v| [depth[v], y[v]]).collect()
}

fn tree(svg: &mut String, t: &MetricTree, problem: &Problem, point: Option<&ModelPoint>) {
    let pos = tree_layout(t);
    let width = pos.iter().map(|p| p[0]).fold(0.0, f64::max).max(1e-9);
    let height = pos.iter().map(|p| p[1]).fold(0.0, f64::max).max(1.0);
    // stretch leaf slots to the drawing height
    let pos: Vec<P2> = pos.iter().map(|p| [p[0], p[1] * width / height]).collect();
    let view = View::fit([0.0, 0.0], [width, width]);
    let at = |p: &TreePoint| -> P2 {
        let e = t.edges()[p.edge];
        let s = p.offset / e.weight;
        let (a, b) = (pos[e.a], pos[e.b]);
        view.px([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])])
    };
    for e in t.edges() {
        let (a, b) = (view.px(pos[e.a]), view.px(pos[e.b]));
        writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-width="1"/>"#,
            a[0], a[1], b[0], b[1]
        )
        .unwrap();
    }
    for (i, body) in problem.bodies.iter().enumerate() {
        let ConvexBody::Tree(b) = body else { continue };
        let color = PALETTE[i % PALETTE.len()];
        let shift = 3.0 * (i as f64 + 1.0);
        for (e, piece) in b.pieces().iter().enumerate() {
            let Some((lo, hi)) = piece else { continue };
            let (p, q) = (at(&TreePoint::new(e, *lo)), at(&TreePoint::new(e, *hi)));
            let len = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
            if len < 0.5 {
                dot(svg, [p[0], p[1] - shift], 2.5, color);
                continue;
            }
            let off = [-(q[1] - p[1]) / len * shift, (q[0] - p[0]) / len * shift];
            writeln!(
                svg,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2.5" stroke-opacity="0.8"/>"#,
                p[0] + off[0],
                p[1] + off[1],
                q[0] + off[0],
                q[1] + off[1]
            )
            .unwrap();
        }
    }
    marks(svg, problem, point, |p| match p {
        ModelPoint::Tree(tp) => at(tp),
        _ => [0.0, 0.0],
    });
}
