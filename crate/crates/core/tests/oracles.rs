//! Tree operations checked against brute-force graph computations.

use geohelly::solver::random_tree;
use geohelly::spaces::{ConvexBody, MetricTree, ModelPoint, SpaceModel, TreeEdge, TreePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Dijkstra over the tree with two extra nodes splitting the edges of p and q.
fn dijkstra_dist(t: &MetricTree, p: TreePoint, q: TreePoint) -> f64 {
    let n = t.vertex_count();
    let (sp, sq) = (n, n + 1);
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n + 2];
    let link = |a: usize, b: usize, w: f64, adj: &mut Vec<Vec<(usize, f64)>>| {
        adj[a].push((b, w));
        adj[b].push((a, w));
    };
    for (i, e) in t.edges().iter().enumerate() {
        let mut cuts = vec![(0.0, e.a)];
        if p.edge == i {
            cuts.push((p.offset, sp));
        }
        if q.edge == i {
            cuts.push((q.offset, sq));
        }
        cuts.push((e.weight, e.b));
        cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in cuts.windows(2) {
            link(w[0].1, w[1].1, w[1].0 - w[0].0, &mut adj);
        }
    }
    let mut dist = vec![f64::INFINITY; n + 2];
    let mut done = vec![false; n + 2];
    dist[sp] = 0.0;
    for _ in 0..n + 2 {
        let u = (0..n + 2).filter(|&v| !done[v]).min_by(|&a, &b| dist[a].total_cmp(&dist[b])).unwrap();
        done[u] = true;
        for &(v, w) in &adj[u] {
            dist[v] = dist[v].min(dist[u] + w);
        }
    }
    dist[sq]
}

fn random_point(rng: &mut ChaCha8Rng, t: &MetricTree) -> TreePoint {
    let e = rng.gen_range(0..t.edges().len());
    TreePoint::new(e, rng.gen_range(0.0..=t.edges()[e].weight))
}

#[test]
fn tree_distance_matches_dijkstra() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..30 {
        let t = random_tree(seed, 3 + seed as usize % 12).unwrap();
        for _ in 0..30 {
            let (p, q) = (random_point(&mut rng, &t), random_point(&mut rng, &t));
            assert!((t.dist(&p, &q) - dijkstra_dist(&t, p, q)).abs() < 1e-12);
        }
    }
}

// Walks the vertex path found by depth-first search.
fn walk(t: &MetricTree, p: TreePoint, q: TreePoint, s: f64) -> TreePoint {
    let d = t.dist(&p, &q);
    let target = s * d;
    if p.edge == q.edge && ((q.offset - p.offset).abs() - d).abs() <= 1e-12 {
        let dir = if q.offset >= p.offset { 1.0 } else { -1.0 };
        return TreePoint::new(p.edge, p.offset + dir * target);
    }
    // leave p's edge by the endpoint on the way to q
    let ep = t.edges()[p.edge];
    let eq = t.edges()[q.edge];
    let mut best = (f64::INFINITY, 0, 0);
    for (start, head) in [(ep.a, p.offset), (ep.b, ep.weight - p.offset)] {
        for (end, tail) in [(eq.a, q.offset), (eq.b, eq.weight - q.offset)] {
            let len = head + t.vertex_distance(start, end) + tail;
            if len < best.0 - 1e-12 {
                best = (len, start, end);
            }
        }
    }
    let (_, start, end) = best;
    let mut path = vec![start];
    fn dfs(t: &MetricTree, v: usize, goal: usize, prev: usize, path: &mut Vec<usize>) -> bool {
        if v == goal {
            return true;
        }
        for &e in t.incident_edges(v) {
            let edge = t.edges()[e];
            let u = if edge.a == v { edge.b } else { edge.a };
            if u != prev {
                path.push(u);
                if dfs(t, u, goal, v, path) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    dfs(t, start, end, usize::MAX, &mut path);
    let head = if start == ep.a { p.offset } else { ep.weight - p.offset };
    if target <= head {
        let off = if start == ep.a { p.offset - target } else { p.offset + target };
        return TreePoint::new(p.edge, off);
    }
    let mut left = target - head;
    for w in path.windows(2) {
        let e = *t
            .incident_edges(w[0])
            .iter()
            .find(|&&e| {
                let edge = t.edges()[e];
                (edge.a == w[0] && edge.b == w[1]) || (edge.b == w[0] && edge.a == w[1])
            })
            .unwrap();
        let edge = t.edges()[e];
        if left <= edge.weight {
            let off = if edge.a == w[0] { left } else { edge.weight - left };
            return TreePoint::new(e, off);
        }
        left -= edge.weight;
    }
    let off = if end == eq.a { left } else { eq.weight - left };
    TreePoint::new(q.edge, off)
}

#[test]
fn tree_geodesic_matches_path_walk() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for seed in 0..30 {
        let t = random_tree(seed, 10).unwrap();
        let space = SpaceModel::Tree(t.clone());
        for _ in 0..30 {
            let (p, q) = (random_point(&mut rng, &t), random_point(&mut rng, &t));
            let s: f64 = rng.gen();
            let got = space.geodesic(&ModelPoint::Tree(p), &ModelPoint::Tree(q), s).unwrap();
            let want = ModelPoint::Tree(walk(&t, p, q, s));
            assert!(space.dist(&got, &want).unwrap() < 1e-9, "seed {seed}");
        }
    }
}

fn sample_tree(t: &MetricTree, step: f64) -> Vec<TreePoint> {
    let mut out = Vec::new();
    for (e, edge) in t.edges().iter().enumerate() {
        let n = (edge.weight / step).ceil() as usize;
        for i in 0..=n {
            out.push(TreePoint::new(e, (i as f64 * step).min(edge.weight)));
        }
    }
    out
}

fn in_pieces(body: &ConvexBody, p: &TreePoint) -> bool {
    let ConvexBody::Tree(b) = body else { unreachable!() };
    matches!(b.pieces()[p.edge], Some((lo, hi)) if lo <= p.offset && p.offset <= hi)
}

#[test]
fn tree_violation_matches_sampled_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for seed in 0..10 {
        let t = random_tree(seed, 9).unwrap();
        let space = SpaceModel::Tree(t.clone());
        let markers: Vec<ModelPoint> = (0..2).map(|_| ModelPoint::Tree(random_point(&mut rng, &t))).collect();
        let body = space.tree_hull(&markers).unwrap();
        let samples = sample_tree(&t, 1e-3);
        let members: Vec<&TreePoint> = samples.iter().filter(|p| in_pieces(&body, p)).collect();
        for _ in 0..10 {
            let x = random_point(&mut rng, &t);
            let brute = members.iter().map(|m| t.dist(&x, m)).fold(f64::INFINITY, f64::min);
            let v = space.violation(&body, &ModelPoint::Tree(x));
            assert!(v <= brute + 1e-12 && brute - v <= 1e-3, "{v} vs {brute}");
        }
    }
}

#[test]
fn violation_at_known_distance() {
    // path 0 - 1 - 2 with a body covering the first edge
    let t = MetricTree::new(
        3,
        vec![TreeEdge { a: 0, b: 1, weight: 1.0 }, TreeEdge { a: 1, b: 2, weight: 1.0 }],
    )
    .unwrap();
    let space = SpaceModel::Tree(t);
    let body = space
        .tree_hull(&[ModelPoint::Tree(TreePoint::new(0, 0.0)), ModelPoint::Tree(TreePoint::new(0, 1.0))])
        .unwrap();
    let v = space.violation(&body, &ModelPoint::Tree(TreePoint::new(1, 0.7)));
    assert!((v - 0.7).abs() < 1e-15);
}

#[test]
fn tripod_hull_is_three_legs() {
    let t = MetricTree::new(
        4,
        vec![
            TreeEdge { a: 0, b: 1, weight: 1.0 },
            TreeEdge { a: 0, b: 2, weight: 2.0 },
            TreeEdge { a: 0, b: 3, weight: 1.5 },
        ],
    )
    .unwrap();
    let space = SpaceModel::Tree(t.clone());
    let tips = [TreePoint::new(0, 0.6), TreePoint::new(1, 1.2), TreePoint::new(2, 1.5)];
    let body = space.tree_hull(&tips.map(ModelPoint::Tree)).unwrap();
    for p in sample_tree(&t, 1e-3) {
        let expected = p.offset <= tips[p.edge].offset + 1e-12;
        assert_eq!(space.violation(&body, &ModelPoint::Tree(p)) == 0.0, expected, "{p:?}");
    }
    // hull of hull points is idempotent
    let again = space
        .tree_hull(&[
            ModelPoint::Tree(TreePoint::new(0, 0.3)),
            ModelPoint::Tree(tips[0]),
            ModelPoint::Tree(tips[1]),
            ModelPoint::Tree(tips[2]),
        ])
        .unwrap();
    assert_eq!(again, body);
}
