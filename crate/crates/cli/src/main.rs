//! Batch front-end for the ghost-polygon calculus: loads a scene, runs one
//! command, emits a deterministic machine-readable report on stdout.
//!
//! Exit codes: 0 on success with all assertions passing, 1 when a verify
//! suite finds counterexamples, 2 for malformed input.

mod expr;
mod scene;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ghostpoly::hyperbolic;
use ghostpoly::repr::orbit_sum;

use crate::expr::ExprParser;
use crate::scene::Scene;

#[derive(Debug, Parser)]
#[command(name = "ghostpoly")]
#[command(about = "exact ghost-polygon calculus: brackets, correlation values, verification suites")]
struct Cli {
    /// Scene file (JSON).
    #[arg(long, global = true)]
    scene: Option<PathBuf>,

    /// Seed for all randomness; recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Sample count for verification suites.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,

    /// Output format.
    #[arg(long, global = true)]
    format: Option<Format>,

    /// Word-length cutoff for orbit sums.
    #[arg(long, global = true, default_value_t = 4)]
    max_word_length: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Intersection number of two named geodesics.
    Eps { g: String, h: String },

    /// Bracket of two expressions (or evaluation of a single expression)
    /// over named configurations, in canonical text form.
    Bracket {
        lhs: String,
        rhs: Option<String>,
    },

    /// Run a named invariant suite and report pass/fail with witnesses.
    Verify {
        /// One of: jacobi, hexagonal, pi-homomorphism, opp-endo,
        /// i-equals-t-bracket, sign-lemma, triangle-commute, cancellations.
        suite: String,
    },

    /// Exact partial sums of I(G, w.H) over reduced group words by length.
    OrbitSum { g: String, h: String },

    /// Barycenter and core diameter of a configuration (decimal report).
    Barycenter { config: String },
}

#[derive(Serialize)]
struct EpsReport {
    command: &'static str,
    g: String,
    h: String,
    epsilon: String,
}

#[derive(Serialize)]
struct BracketReport {
    command: &'static str,
    lhs: String,
    rhs: Option<String>,
    result: String,
}

#[derive(Serialize)]
struct OrbitRowOut {
    length: usize,
    words: usize,
    skipped: usize,
    layer_sum: String,
    partial_sum: String,
}

#[derive(Serialize)]
struct OrbitReport {
    command: &'static str,
    g: String,
    h: String,
    max_word_length: usize,
    rows: Vec<OrbitRowOut>,
    total: String,
}

#[derive(Serialize)]
struct BarycenterReport {
    command: &'static str,
    config: String,
    /// Upper half-plane coordinates, decimal.
    x: f64,
    y: f64,
    grad_norm: f64,
    grad_tolerance: f64,
    core_diameter: f64,
    objective: f64,
}

fn load_scene(cli: &Cli) -> Result<Scene> {
    let path = cli
        .scene
        .as_ref()
        .ok_or_else(|| anyhow!("this command needs --scene <file>"))?;
    Scene::load(path)
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Eps { g, h } => {
            let scene = load_scene(cli)?;
            let eg = scene.geodesic(g)?;
            let eh = scene.geodesic(h)?;
            let report = EpsReport {
                command: "eps",
                g: g.clone(),
                h: h.clone(),
                epsilon: ghostpoly::epsilon_theta(eg, eh).to_string(),
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(true)
        }
        Command::Bracket { lhs, rhs } => {
            let scene = load_scene(cli)?;
            let parser = ExprParser::new(&scene);
            let sig = scene.family.signature().clone();
            let result = match rhs {
                Some(rhs_text) => {
                    let a = parser.parse(lhs)?;
                    let b = parser.parse(rhs_text)?;
                    ghostpoly::ghost::bracket(&a, &b, &sig)
                }
                None => parser.parse(lhs)?,
            };
            let report = BracketReport {
                command: "bracket",
                lhs: lhs.clone(),
                rhs: rhs.clone(),
                result: result.to_string(),
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(true)
        }
        Command::Verify { suite } => {
            let scene = load_scene(cli)?;
            let report = suites::run_suite(&scene, suite, cli.samples, cli.seed)
                .ok_or_else(|| {
                    anyhow!(
                        "unknown suite `{suite}`; available: {}",
                        suites::SUITE_NAMES.join(", ")
                    )
                })?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.passed)
        }
        Command::OrbitSum { g, h } => {
            let scene = load_scene(cli)?;
            let cg = scene.generator(g)?;
            let ch = scene.generator(h)?;
            let out = orbit_sum(
                &scene.family,
                &cg,
                &ch,
                &scene.group,
                cli.max_word_length,
            )?;
            let rows: Vec<OrbitRowOut> = out
                .rows
                .iter()
                .map(|r| OrbitRowOut {
                    length: r.length,
                    words: r.words,
                    skipped: r.skipped,
                    layer_sum: r.layer_sum.to_string(),
                    partial_sum: r.partial_sum.to_string(),
                })
                .collect();
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    println!("length,words,skipped,layer_sum,partial_sum");
                    for r in &rows {
                        println!(
                            "{},{},{},{},{}",
                            r.length, r.words, r.skipped, r.layer_sum, r.partial_sum
                        );
                    }
                }
                Format::Json => {
                    let report = OrbitReport {
                        command: "orbit-sum",
                        g: g.clone(),
                        h: h.clone(),
                        max_word_length: cli.max_word_length,
                        rows,
                        total: out.total.to_string(),
                    };
                    println!("{}", serde_json::to_string_pretty(&report)?);
                }
            }
            Ok(true)
        }
        Command::Barycenter { config } => {
            let scene = load_scene(cli)?;
            let c = scene.generator(config)?;
            let b = hyperbolic::barycenter(&c)?;
            let r = hyperbolic::core_diameter(&c)?;
            let (x, y) = b.point.to_half_plane();
            let report = BarycenterReport {
                command: "barycenter",
                config: config.clone(),
                x,
                y,
                grad_norm: b.grad_norm,
                grad_tolerance: hyperbolic::GRAD_TOL,
                core_diameter: r,
                objective: b.objective,
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        let file: scene::SceneFile = serde_json::from_str(r#"{"version": 1}"#).unwrap();
        let sc = Scene::from_file(file).unwrap();
        assert!(suites::run_suite(&sc, "nope", 1, 0).is_none());
    }

    #[test]
    fn bail_without_scene() {
        let cli = Cli::parse_from(["ghostpoly", "eps", "g", "h"]);
        assert!(run(&cli).is_err());
    }
}
