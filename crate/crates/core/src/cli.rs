//! The `helly` command line.
//!
//! Exit codes: 0 when a point is found or verified, 2 for best-effort results
//! and rejected points, 3 when the intersection hypothesis fails, 1 for every
//! other error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cone_map::build_cone_map;
use crate::error::{invalid, Error, Result};
use crate::format::{self, point_to_json, report_to_value, trace_to_value};
use crate::render::render_svg;
use crate::simplex::{enumerate_grid, find_fully_labeled, BarycentricPoint, GridSpec, Labeling};
use crate::solver::{
    generate_instance, oracle_grid, oracle_projection, random_tree, sharpness_instance_with_width, solve_general,
    SolveOptions, Status,
};
use crate::spaces::SpaceModel;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_BEST_EFFORT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "helly", version, about = "Find common points of convex bodies in geodesic spaces")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Residual accepted as a common point [default: 1e-6, hyperbolic 1e-5]
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Finest grid resolution, a power of two
    #[arg(long = "max-res", global = true, default_value_t = 64)]
    pub max_res: u32,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Independent check run after `solve`
    #[arg(long, global = true, value_enum, default_value_t = OracleKind::None)]
    pub oracle: OracleKind,
    /// Grid spacing of the grid oracle
    #[arg(long = "oracle-res", global = true, default_value_t = 1e-3)]
    pub oracle_res: f64,
    /// Write the per-level search trace here
    #[arg(long, global = true)]
    pub trace: Option<PathBuf>,
    /// Write the result here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Search for a common point of all bodies
    Solve { input: PathBuf },
    /// Check a candidate point against every body
    Verify {
        input: PathBuf,
        /// Point as a JSON array
        #[arg(long)]
        point: String,
    },
    /// Write a seeded instance satisfying the intersection hypothesis
    Generate {
        #[arg(long, value_enum, default_value_t = SpaceKind::Euclidean)]
        kind: SpaceKind,
        /// Euclidean dimension
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Number of bodies [default: dimension + 2]
        #[arg(long)]
        m: Option<usize>,
        /// Vertex count of generated trees
        #[arg(long, default_value_t = 10)]
        vertices: usize,
    },
    /// Count fully-labeled cells of a seeded random admissible labeling
    Sperner {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        res: u32,
    },
    /// Write the facet-slab family with no common point
    Sharpness {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0.01)]
        width: f64,
    },
    /// Evaluate the cone map at a barycentric point
    EvalMap {
        input: PathBuf,
        /// Barycentric coordinates as a JSON array
        #[arg(long)]
        z: String,
    },
    /// Draw the instance as SVG
    Render {
        input: PathBuf,
        /// Highlight this point
        #[arg(long)]
        point: Option<String>,
        /// Solve first and highlight the result
        #[arg(long)]
        solve: bool,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Grid,
    Projection,
    None,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Euclidean,
    Tree,
    Hyperbolic,
}

/// Sizes the global worker pool from `HELLY_THREADS`, if set.
pub fn init_threads() {
    if let Some(n) = std::env::var("HELLY_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // fails only if the pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

pub fn exit_code(err: &Error) -> i32 {
    if is_hypothesis(err) {
        EXIT_HYPOTHESIS
    } else {
        EXIT_ERROR
    }
}

fn is_hypothesis(err: &Error) -> bool {
    matches!(
        err,
        Error::Hypothesis(_) | Error::MissingWitness { .. } | Error::InvalidWitness { .. }
    )
}

impl RunConfig {
    fn options(&self, space: &SpaceModel) -> Result<SolveOptions> {
        let mut opts = SolveOptions::for_space(space).with_max_resolution(self.max_res);
        if let Some(eps) = self.eps {
            opts = opts.with_eps(eps);
        }
        opts.validate()?;
        Ok(opts)
    }

    fn emit(&self, text: &str, stdout: &mut dyn Write) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => stdout.write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn emit_json(&self, value: &Value, stdout: &mut dyn Write) -> Result<()> {
        let text = serde_json::to_string_pretty(value).expect("json serializes") + "\n";
        self.emit(&text, stdout)
    }
}

/// Runs one command and returns the process exit code. Results go to `--out`
/// or `stdout`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    if let Some(eps) = config.eps {
        if !(eps > 0.0) {
            return Err(invalid("--eps must be positive"));
        }
    }
    if !config.max_res.is_power_of_two() {
        return Err(invalid("--max-res must be a power of two"));
    }
    match &config.command {
        Command::Solve { input } => solve_cmd(config, input, stdout),
        Command::Verify { input, point } => {
            let problem = format::read_problem(input)?;
            let opts = config.options(&problem.space)?;
            let x = format::parse_point(&problem.space, point)?;
            let violations: Vec<f64> = problem.bodies.iter().map(|b| problem.space.violation(b, &x)).collect();
            let residual = problem.residual(&x);
            let ok = residual <= opts.eps;
            config.emit_json(
                &json!({
                    "status": if ok { "verified" } else { "rejected" },
                    "point": point_to_json(&x),
                    "residual": residual,
                    "violations": violations,
                }),
                stdout,
            )?;
            Ok(if ok { EXIT_OK } else { EXIT_BEST_EFFORT })
        }
        Command::Generate { kind, n, m, vertices } => {
            let space = match kind {
                SpaceKind::Euclidean => SpaceModel::euclidean(*n)?,
                SpaceKind::Hyperbolic => SpaceModel::Hyperbolic,
                SpaceKind::Tree => SpaceModel::Tree(random_tree(config.seed, *vertices)?),
            };
            let m = m.unwrap_or(space.dimension() + 2);
            let problem = generate_instance(config.seed, &space, m)?;
            config.emit(&(format::problem_to_json(&problem) + "\n"), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Sharpness { n, width } => {
            let problem = sharpness_instance_with_width(*n, *width)?;
            config.emit(&(format::problem_to_json(&problem) + "\n"), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Sperner { dim, res } => {
            let spec = GridSpec::new(*dim, *res)?;
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let labeling = Labeling::from_fn(spec, |v| {
                let support: Vec<usize> = (0..=*dim).filter(|&i| v.in_support(i)).collect();
                support[rng.gen_range(0..support.len())]
            });
            let cells = find_fully_labeled(spec, &labeling)?;
            let listed: Vec<Value> = cells
                .iter()
                .map(|c| json!(c.vertices().iter().map(|v| v.numerators().to_vec()).collect::<Vec<_>>()))
                .collect();
            config.emit_json(
                &json!({
                    "dim": dim,
                    "resolution": res,
                    "vertices": enumerate_grid(spec).len(),
                    "cells": spec.cell_count(),
                    "fully_labeled": cells.len(),
                    "odd": cells.len() % 2 == 1,
                    "fully_labeled_cells": listed,
                }),
                stdout,
            )?;
            Ok(EXIT_OK)
        }
        Command::EvalMap { input, z } => {
            let problem = format::read_problem(input)?;
            let coords: Vec<f64> = serde_json::from_str(z).map_err(|e| Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
            let tolerance = config.options(&problem.space)?.witness_tolerance;
            let cm = build_cone_map(&problem.space, &problem.bodies, &problem.witnesses, tolerance)?;
            let zp = BarycentricPoint::new(coords)?;
            if zp.dim() != cm.dim() {
                return Err(invalid(format!("z needs {} coordinates", cm.dim() + 1)));
            }
            let x = cm.evaluate(&zp)?;
            config.emit_json(
                &json!({
                    "z": zp.coords(),
                    "support": zp.support().iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "point": point_to_json(&x),
                    "residual": problem.residual(&x),
                }),
                stdout,
            )?;
            Ok(EXIT_OK)
        }
        Command::Render { input, point, solve } => {
            let problem = format::read_problem(input)?;
            let mut highlight = match point {
                Some(p) => Some(format::parse_point(&problem.space, p)?),
                None => None,
            };
            if *solve {
                let report = solve_general(&problem, &config.options(&problem.space)?)?;
                highlight = Some(report.point);
            }
            config.emit(&render_svg(&problem, highlight.as_ref())?, stdout)?;
            Ok(EXIT_OK)
        }
    }
}

fn solve_cmd(config: &RunConfig, input: &PathBuf, stdout: &mut dyn Write) -> Result<i32> {
    let problem = format::read_problem(input)?;
    let opts = config.options(&problem.space)?;
    let report = match solve_general(&problem, &opts) {
        Ok(r) => r,
        Err(e) if is_hypothesis(&e) => {
            config.emit_json(
                &json!({ "status": Status::InfeasibleHypothesis.as_str(), "error": e.to_string() }),
                stdout,
            )?;
            return Ok(EXIT_HYPOTHESIS);
        }
        Err(e) => return Err(e),
    };
    let mut value = report_to_value(&report);
    let found = report.status == Status::Found;
    match config.oracle {
        OracleKind::None => {}
        OracleKind::Grid => {
            let hit = oracle_grid(&problem, config.oracle_res)?;
            value["oracle"] = json!({
                "kind": "grid",
                "resolution": config.oracle_res,
                "found": hit.is_some(),
                "point": hit.as_ref().map(point_to_json),
                "residual": hit.as_ref().map(|p| problem.residual(p)),
                "agrees": hit.is_some() == found,
            });
        }
        OracleKind::Projection => {
            let res = oracle_projection(&problem, 10_000)?;
            let hit = res.residual <= opts.eps;
            value["oracle"] = json!({
                "kind": "projection",
                "iterations": res.iterations,
                "found": hit,
                "point": point_to_json(&res.point),
                "residual": res.residual,
                "agrees": hit == found,
            });
        }
    }
    if let Some(path) = &config.trace {
        let text = serde_json::to_string_pretty(&trace_to_value(&report.trace)).expect("json serializes");
        std::fs::write(path, text + "\n")?;
    }
    config.emit_json(&value, stdout)?;
    Ok(if found { EXIT_OK } else { EXIT_BEST_EFFORT })
}
