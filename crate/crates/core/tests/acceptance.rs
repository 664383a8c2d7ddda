//! Acceptance battery: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use geohelly::cone_map::build_cone_map;
use geohelly::simplex::{enumerate_grid, find_fully_labeled, BarycentricPoint, GridSpec, GridVertex, Labeling};
use geohelly::solver::{
    generate_instance, oracle_grid, random_tree, sharpness_instance, sharpness_instance_with_width, solve,
    solve_general, subsets, Problem, SolveOptions, Status,
};
use geohelly::spaces::{ModelPoint, SpaceModel, TreePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SPERNER_LIMIT: Duration = Duration::from_secs(60);
const TREE_LIMIT: Duration = Duration::from_secs(30);
const EUCLIDEAN_LIMIT: Duration = Duration::from_secs(300);
const RANDOM_LABELINGS: usize = 1000;

const FACE_TOLERANCE: f64 = 1e-9;
const FACE_SAMPLES: usize = 200;
const TREE_EPS: f64 = 1e-9;
const TREE_ORACLE_STEP: f64 = 1e-3;
const EUCLIDEAN_EPS: f64 = 1e-3;
const EUCLIDEAN_ORACLE_STEP: f64 = 1e-3;
const MAX_RESOLUTION: u32 = 64;
const SHARPNESS_MIN_RESIDUAL: f64 = 0.05;
const GEODESIC_CHECKS: usize = 1000;
const GEODESIC_TOLERANCE: f64 = 1e-9;

/// One solver run and the oracle's verdict on the same instance.
struct CrossCheck {
    label: String,
    solver_found: bool,
    oracle_found: bool,
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn random_labeling(spec: GridSpec, rng: &mut ChaCha8Rng) -> Labeling {
    Labeling::from_fn(spec, |v| {
        let support: Vec<usize> = (0..=spec.dim()).filter(|&i| v.in_support(i)).collect();
        support[rng.gen_range(0..support.len())]
    })
}

fn c1_sperner() -> Outcome {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut even = 0usize;
    for k in 1..=3 {
        let spec = GridSpec::new(2, k).unwrap();
        let verts = enumerate_grid(spec);
        let supports: Vec<Vec<usize>> = verts
            .iter()
            .map(|v| (0..3).filter(|&i| v.in_support(i)).collect())
            .collect();
        // odometer over every admissible labeling
        let mut choice = vec![0usize; verts.len()];
        loop {
            let labels: HashMap<GridVertex, usize> = verts
                .iter()
                .zip(&choice)
                .zip(&supports)
                .map(|((v, &c), s)| (v.clone(), s[c]))
                .collect();
            let labeling = Labeling::from_map(spec, labels).unwrap();
            let cells = find_fully_labeled(spec, &labeling).unwrap();
            checked += 1;
            if cells.len() % 2 == 0 {
                even += 1;
            }
            let mut i = 0;
            while i < choice.len() {
                choice[i] += 1;
                if choice[i] < supports[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in [2, 3] {
        let spec = GridSpec::new(3, k).unwrap();
        for _ in 0..RANDOM_LABELINGS {
            let labeling = random_labeling(spec, &mut rng);
            checked += 1;
            if find_fully_labeled(spec, &labeling).unwrap().len() % 2 == 0 {
                even += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        even == 0 && elapsed < SPERNER_LIMIT,
        format!("{checked} labelings, {even} with even count, {:.2?}", elapsed),
    )
}

fn sample_face(rng: &mut ChaCha8Rng, m: usize, face: &[usize]) -> BarycentricPoint {
    let w: Vec<f64> = face.iter().map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let total: f64 = w.iter().sum();
    let mut coords = vec![0.0; m];
    for (&i, x) in face.iter().zip(&w) {
        coords[i] = x / total;
    }
    // renormalize exactly onto the simplex
    let s: f64 = coords.iter().sum();
    coords.iter_mut().for_each(|c| *c /= s);
    BarycentricPoint::new(coords).unwrap()
}

fn face_violation(problem: &Problem, seed: u64) -> f64 {
    let m = problem.body_count();
    let cm = build_cone_map(&problem.space, &problem.bodies, &problem.witnesses, 1e-9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for size in 1..m {
        for face in subsets(m, size) {
            for _ in 0..FACE_SAMPLES {
                let z = sample_face(&mut rng, m, &face);
                let x = cm.evaluate(&z).unwrap();
                for j in (0..m).filter(|j| !face.contains(j)) {
                    worst = worst.max(problem.space.violation(&problem.bodies[j], &x));
                }
            }
        }
    }
    worst
}

fn c2_faces() -> Outcome {
    let mut worst: f64 = 0.0;
    let plane = SpaceModel::euclidean(2).unwrap();
    for seed in 0..20 {
        worst = worst.max(face_violation(&generate_instance(seed, &plane, 4).unwrap(), seed));
    }
    for seed in 0..20 {
        let tree = SpaceModel::Tree(random_tree(seed, 10).unwrap());
        worst = worst.max(face_violation(&generate_instance(seed, &tree, 3).unwrap(), seed));
    }
    outcome(
        worst <= FACE_TOLERANCE,
        format!("40 instances, max violation off the face {worst:e}"),
    )
}

fn c3_trees(checks: &mut Vec<CrossCheck>) -> Outcome {
    let start = Instant::now();
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let tree = SpaceModel::Tree(random_tree(seed, 8 + (seed % 8) as usize).unwrap());
        let m = 3 + (seed % 4) as usize;
        let problem = generate_instance(seed, &tree, m).unwrap();
        let opts = SolveOptions::for_space(&tree)
            .with_eps(TREE_EPS)
            .with_max_resolution(MAX_RESOLUTION);
        let report = solve_general(&problem, &opts).unwrap();
        let found = report.status == Status::Found && report.residual <= TREE_EPS;
        let oracle = oracle_grid(&problem, TREE_ORACLE_STEP).unwrap().is_some();
        if !found || !oracle {
            failures += 1;
        }
        worst = worst.max(report.residual);
        checks.push(CrossCheck {
            label: format!("tree seed {seed}"),
            solver_found: found,
            oracle_found: oracle,
        });
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && elapsed < TREE_LIMIT,
        format!("100 instances, {failures} failures, worst residual {worst:e}, {elapsed:.2?}"),
    )
}

fn euclidean_battery(seeds: std::ops::Range<u64>, m: usize, checks: &mut Vec<CrossCheck>) -> (usize, f64) {
    let plane = SpaceModel::euclidean(2).unwrap();
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for seed in seeds {
        let problem = generate_instance(seed, &plane, m).unwrap();
        let opts = SolveOptions::for_space(&plane)
            .with_eps(EUCLIDEAN_EPS)
            .with_max_resolution(MAX_RESOLUTION);
        let report = if m == 4 {
            solve(&problem, &opts).unwrap()
        } else {
            solve_general(&problem, &opts).unwrap()
        };
        // residual against every original body, recomputed here
        let residual = problem.residual(&report.point);
        let found = report.status == Status::Found && residual <= EUCLIDEAN_EPS;
        let oracle = oracle_grid(&problem, EUCLIDEAN_ORACLE_STEP).unwrap().is_some();
        if !found || !oracle {
            failures += 1;
        }
        worst = worst.max(residual);
        checks.push(CrossCheck {
            label: format!("euclidean m={m} seed {seed}"),
            solver_found: found,
            oracle_found: oracle,
        });
    }
    (failures, worst)
}

fn c4_euclidean(checks: &mut Vec<CrossCheck>) -> Outcome {
    let start = Instant::now();
    let (f4, w4) = euclidean_battery(0..50, 4, checks);
    let (f5, w5) = euclidean_battery(0..50, 5, checks);
    let elapsed = start.elapsed();
    outcome(
        f4 + f5 == 0 && elapsed < EUCLIDEAN_LIMIT,
        format!(
            "m=4: {f4} failures (worst {w4:e}); m=5: {f5} failures (worst {w5:e}); {elapsed:.2?}"
        ),
    )
}

fn c5_sharpness(checks: &mut Vec<CrossCheck>) -> Outcome {
    let problem = sharpness_instance(2).unwrap();
    let hypothesis = problem.validate(1e-9).is_ok();
    let oracle = oracle_grid(&problem, 1e-3).unwrap().is_some();
    let report = solve(&problem, &SolveOptions::for_space(&problem.space)).unwrap();
    let best_effort = report.status == Status::BestEffort;
    checks.push(CrossCheck {
        label: "sharpness n=2".into(),
        solver_found: !best_effort,
        oracle_found: oracle,
    });
    outcome(
        hypothesis && !oracle && best_effort && report.residual >= SHARPNESS_MIN_RESIDUAL,
        format!(
            "witnesses valid: {hypothesis}, oracle found: {oracle}, status {}, residual {:.6}",
            report.status.as_str(),
            report.residual
        ),
    )
}

fn random_point(rng: &mut ChaCha8Rng, space: &SpaceModel) -> ModelPoint {
    match space {
        SpaceModel::Euclidean { n } => ModelPoint::Euclidean((0..*n).map(|_| rng.gen_range(-5.0..5.0)).collect()),
        SpaceModel::Hyperbolic => {
            let r = 0.9 * rng.gen::<f64>().sqrt();
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            ModelPoint::Hyperbolic([r * a.cos(), r * a.sin()])
        }
        SpaceModel::Tree(t) => {
            let e = rng.gen_range(0..t.edges().len());
            ModelPoint::Tree(TreePoint::new(e, rng.gen_range(0.0..=t.edges()[e].weight)))
        }
    }
}

fn c6_geodesics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for model in 0..3 {
        for check in 0..GEODESIC_CHECKS {
            let space = match model {
                0 => SpaceModel::euclidean(3).unwrap(),
                1 => SpaceModel::Tree(random_tree(check as u64, 12).unwrap()),
                _ => SpaceModel::Hyperbolic,
            };
            let (x, y, x2, y2) = (
                random_point(&mut rng, &space),
                random_point(&mut rng, &space),
                random_point(&mut rng, &space),
                random_point(&mut rng, &space),
            );
            let t: f64 = rng.gen();
            let d = space.dist(&x, &y).unwrap();
            let g = space.geodesic(&x, &y, t).unwrap();
            let g2 = space.geodesic(&x2, &y2, t).unwrap();
            let ends = space.geodesic(&x, &y, 0.0).unwrap() == x && space.geodesic(&x, &y, 1.0).unwrap() == y;
            let prop = (space.dist(&x, &g).unwrap() - t * d)
                .abs()
                .max((space.dist(&g, &y).unwrap() - (1.0 - t) * d).abs());
            let slack = space.dist(&g, &g2).unwrap()
                - (1.0 - t) * space.dist(&x, &x2).unwrap()
                - t * space.dist(&y, &y2).unwrap();
            worst = worst.max(prop).max(slack);
            if !ends || prop > GEODESIC_TOLERANCE || slack > GEODESIC_TOLERANCE {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!("{} checks, {failures} failures, worst deviation {worst:e}", 3 * GEODESIC_CHECKS),
    )
}

fn c7_reduction(checks: &mut Vec<CrossCheck>) -> Outcome {
    let (failures, worst) = euclidean_battery(1000..1020, 5, checks);
    outcome(
        failures == 0,
        format!("20 instances, {failures} failures, worst residual over all five bodies {worst:e}"),
    )
}

fn c8_cross_validation(checks: &mut Vec<CrossCheck>) -> Outcome {
    let hyperbolic = SpaceModel::Hyperbolic;
    for seed in 0..20 {
        let problem = generate_instance(seed, &hyperbolic, 4).unwrap();
        let opts = SolveOptions::for_space(&hyperbolic).with_eps(1e-3);
        let report = solve(&problem, &opts).unwrap();
        checks.push(CrossCheck {
            label: format!("hyperbolic seed {seed}"),
            solver_found: report.status == Status::Found,
            oracle_found: oracle_grid(&problem, 1e-3).unwrap().is_some(),
        });
    }
    for (n, step) in [(1, 1e-3), (2, 1e-3), (3, 5e-3)] {
        let problem = sharpness_instance_with_width(n, 0.01).unwrap();
        let report = solve(&problem, &SolveOptions::for_space(&problem.space)).unwrap();
        checks.push(CrossCheck {
            label: format!("sharpness n={n}"),
            solver_found: report.status == Status::Found,
            oracle_found: oracle_grid(&problem, step).unwrap().is_some(),
        });
    }
    let disagreements: Vec<&str> = checks
        .iter()
        .filter(|c| c.solver_found != c.oracle_found)
        .map(|c| c.label.as_str())
        .collect();
    let sharp_ok = checks
        .iter()
        .filter(|c| c.label.starts_with("sharpness"))
        .all(|c| !c.solver_found && !c.oracle_found);
    outcome(
        disagreements.is_empty() && sharp_ok,
        format!("{} instances, {} disagreements {:?}", checks.len(), disagreements.len(), disagreements),
    )
}

fn main() -> ExitCode {
    let mut checks = Vec::new();
    let results = [
        ("1 sperner parity", c1_sperner()),
        ("2 cone-map face containment", c2_faces()),
        ("3 tree helly", c3_trees(&mut checks)),
        ("4 euclidean helly", c4_euclidean(&mut checks)),
        ("5 sharpness", c5_sharpness(&mut checks)),
        ("6 geodesic axioms", c6_geodesics()),
        ("7 reduction consistency", c7_reduction(&mut checks)),
        ("8 oracle cross-validation", c8_cross_validation(&mut checks)),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        println!("{} criterion {name}: {}", if r.pass { "PASS" } else { "FAIL" }, r.detail);
        if !r.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
