//! Library side of the `nhep` command-line tool. [`run`] executes one
//! subcommand against a resolved [`RunConfig`] and returns the JSON report
//! plus any file artifacts; the binary only handles flags and writing.

pub mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use nhep_core::crossing::{
    beta_transition_with, classify_with, local_maxima, overlap_peaks, toy_scan,
    BetaTransitionOptions, ClassifyOptions,
};
use nhep_core::ep::{grid_ep_search_with, toy_ep_roots_with, GridSearchOptions, RootOptions};
use nhep_core::io::{ingest_csv, write_sheet_grid, write_sphere_curve, write_trajectory};
use nhep_core::monodromy::{encircle_with, LoopOptions};
use nhep_core::oracle::AnalyticOracle;
use nhep_core::sphere::{lift_cut, PlanePoint};
use nhep_core::surface::{build_surface_with, cut_components, CutComponent, SheetGrid, SurfaceOptions};
use nhep_core::toy::ToyModel;
use nhep_core::{ComplexScalar, PairSampler};
use serde_json::{json, Value};

pub use config::{resolve, Overrides, RunConfig, Source};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] nhep_core::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

#[derive(Debug, Parser)]
#[command(name = "nhep", version, about = "Exceptional points of 2x2 non-Hermitian Hamiltonians")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON config file, applied on top of the preset.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Named parameter set.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Directory for the report and CSV artifacts.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for grid sampling.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Surface grid, e.g. 256x64.
    #[arg(long, global = true, value_parser = config::parse_grid)]
    pub grid: Option<(usize, usize)>,
    /// Convergence tolerance of the command.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// 1-D α scan at fixed β: trajectory CSV and crossing classification.
    ToySweep,
    /// Exceptional points, analytic or by 2-D grid search.
    FindEps,
    /// Riemann sheets and branch cuts over the window.
    Surface,
    /// Monodromy of the eigenvalue pair around the configured loop.
    Encircle,
    /// β where the crossing type switches from LZ to WB.
    BetaScan,
    /// Stereographic projection of points or computed cuts.
    Project,
    /// Classify an externally computed trajectory CSV.
    IngestClassify {
        /// Overrides `input` from the config.
        path: Option<PathBuf>,
    },
    /// Surface or loop on the analytic oracle.
    Oracle,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ToySweep => "toy-sweep",
            Command::FindEps => "find-eps",
            Command::Surface => "surface",
            Command::Encircle => "encircle",
            Command::BetaScan => "beta-scan",
            Command::Project => "project",
            Command::IngestClassify { .. } => "ingest-classify",
            Command::Oracle => "oracle",
        }
    }
}

/// One output file, relative to `--out`.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: Value,
    pub artifacts: Vec<Artifact>,
}

enum Sampler {
    Toy(ToyModel),
    Oracle(AnalyticOracle),
}

impl PairSampler for Sampler {
    fn sample(&self, p1: f64, p2: f64) -> nhep_core::Result<[ComplexScalar; 2]> {
        match self {
            Sampler::Toy(m) => m.sample(p1, p2),
            Sampler::Oracle(o) => o.sample(p1, p2),
        }
    }
}

fn sampler(cfg: &RunConfig, source: Source) -> Sampler {
    match source {
        Source::Toy => Sampler::Toy(cfg.toy.model()),
        Source::Oracle => Sampler::Oracle(cfg.oracle),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn artifact(name: &str, write: impl FnOnce(&mut Vec<u8>) -> nhep_core::Result<()>) -> Result<Artifact, CliError> {
    let mut bytes = Vec::new();
    write(&mut bytes)?;
    Ok(Artifact {
        name: name.to_string(),
        bytes,
    })
}

fn classify_opts(cfg: &RunConfig) -> ClassifyOptions {
    let mut o = ClassifyOptions::default();
    if let Some(t) = cfg.tolerance {
        o.gap_floor = t;
    }
    o
}

pub fn run(command: &Command, cfg: &RunConfig) -> Result<RunOutput, CliError> {
    cfg.validate()?;
    let (result, artifacts) = match command {
        Command::ToySweep => toy_sweep(cfg)?,
        Command::FindEps => find_eps(cfg)?,
        Command::Surface => surface(cfg, cfg.source)?,
        Command::Encircle => encircle(cfg, cfg.source)?,
        Command::BetaScan => beta_scan(cfg)?,
        Command::Project => project(cfg)?,
        Command::IngestClassify { path } => ingest_classify(cfg, path.as_ref())?,
        Command::Oracle => match cfg.oracle_task {
            config::OracleTask::Surface => surface(cfg, Source::Oracle)?,
            config::OracleTask::Loop => encircle(cfg, Source::Oracle)?,
        },
    };
    Ok(RunOutput {
        report: json!({
            "command": command.name(),
            "config": to_json(cfg),
            "result": result,
        }),
        artifacts,
    })
}

type Outcome = Result<(Value, Vec<Artifact>), CliError>;

fn toy_sweep(cfg: &RunConfig) -> Outcome {
    let scan = toy_scan(&cfg.toy, &cfg.scan)?;
    let report = classify_with(&scan.trajectory, &classify_opts(cfg))?;
    let peaks = overlap_peaks(&scan.trajectory.ts, &scan.vectors)?;
    let entropy_peaks = local_maxima(&scan.trajectory.ts, &scan.entropies, 0.0);
    let csv = artifact("trajectory.csv", |b| write_trajectory(&scan.trajectory, b))?;
    Ok((
        json!({
            "class_report": to_json(&report),
            "overlap_peaks": peaks,
            "entropy_peaks": entropy_peaks,
        }),
        vec![csv],
    ))
}

fn find_eps(cfg: &RunConfig) -> Outcome {
    let result = match cfg.search {
        config::SearchMode::Analytic => {
            let mut opts = RootOptions::default();
            if let Some(t) = cfg.tolerance {
                opts.tol = t;
            }
            let eps = toy_ep_roots_with(&cfg.toy, cfg.alpha_bracket, &opts)?;
            json!({ "mode": "analytic", "eps": to_json(&eps) })
        }
        config::SearchMode::Grid => {
            let mut opts = GridSearchOptions {
                coarse_n: cfg.grid.0.min(cfg.grid.1).max(8),
                ..GridSearchOptions::default()
            };
            if let Some(t) = cfg.tolerance {
                opts.rel_tol = t;
            }
            let found = grid_ep_search_with(&sampler(cfg, cfg.source), &cfg.window, &opts)?;
            json!({
                "mode": "grid",
                "eps": to_json(&found.eps),
                "candidates": found.candidates,
                "skipped_samples": found.skipped_samples,
            })
        }
    };
    Ok((result, Vec::new()))
}

fn surface_opts(cfg: &RunConfig) -> SurfaceOptions {
    let mut o = SurfaceOptions::default();
    if let Some(t) = cfg.tolerance {
        o.coincidence_rel = t;
    }
    o
}

fn component_json(grid: &SheetGrid, comps: &[CutComponent]) -> Value {
    comps
        .iter()
        .map(|c| {
            let ends: Vec<(f64, f64)> = c.endpoints.iter().map(|&(x, y)| grid.index_to_params(x, y)).collect();
            json!({
                "edges": c.edges.len(),
                "endpoints": ends,
                "endpoints_index": c.endpoints,
                "touches_boundary": c.touches_boundary,
            })
        })
        .collect()
}

fn build_grid(cfg: &RunConfig, source: Source) -> Result<SheetGrid, CliError> {
    Ok(build_surface_with(
        &sampler(cfg, source),
        &cfg.window,
        cfg.grid.0,
        cfg.grid.1,
        cfg.delta_mode,
        &surface_opts(cfg),
    )?)
}

fn surface(cfg: &RunConfig, source: Source) -> Outcome {
    let grid = build_grid(cfg, source)?;
    let re = cut_components(&grid, &grid.re_cut_edges);
    let im = cut_components(&grid, &grid.im_cut_edges);
    let jumps = cut_components(&grid, &grid.cut_cells);
    let csv = artifact("surface.csv", |b| write_sheet_grid(&grid, b))?;
    let full = Artifact {
        name: "sheets.json".into(),
        bytes: serde_json::to_vec(&grid).expect("grid serializes"),
    };
    Ok((
        json!({
            "source": source,
            "n1": grid.n1(),
            "n2": grid.n2(),
            "missing": grid.missing.iter().filter(|&&m| m).count(),
            "cut_cells": grid.cut_cells.len(),
            "jump_components": component_json(&grid, &jumps),
            "re_components": component_json(&grid, &re),
            "im_components": component_json(&grid, &im),
        }),
        vec![csv, full],
    ))
}

fn encircle(cfg: &RunConfig, source: Source) -> Outcome {
    let mut opts = LoopOptions {
        n_steps: cfg.n_steps,
        ..LoopOptions::default()
    };
    if let Some(t) = cfg.tolerance {
        opts.closure_tol = t;
    }
    let known = match source {
        Source::Toy => toy_ep_roots_with(&cfg.toy.model().with_beta(1.0)?, cfg.alpha_bracket, &RootOptions::default())
            .unwrap_or_default(),
        Source::Oracle => cfg
            .oracle
            .branch_points()
            .iter()
            .map(|z| nhep_core::ep::EpLocation {
                p1: z.re,
                p2: z.im,
                residual: 0.0,
                order: 2,
            })
            .collect(),
    };
    let r = encircle_with(&sampler(cfg, source), &cfg.loop_path, &opts, &known)?;
    Ok((json!({ "source": source, "loop_result": to_json(&r) }), Vec::new()))
}

fn beta_scan(cfg: &RunConfig) -> Outcome {
    let mut opts = BetaTransitionOptions {
        scan: cfg.scan,
        ..BetaTransitionOptions::default()
    };
    if let Some(t) = cfg.tolerance {
        opts.tol = t;
    }
    let beta_c = beta_transition_with(&cfg.toy.model(), cfg.beta_window, &opts)?;
    Ok((
        json!({ "beta_c": beta_c, "beta_window": cfg.beta_window, "tolerance": opts.tol }),
        Vec::new(),
    ))
}

fn project(cfg: &RunConfig) -> Outcome {
    if !cfg.points.is_empty() {
        let lifted = lift_cut(&cfg.points);
        let csv = artifact("sphere_points.csv", |b| write_sphere_curve(&lifted, b))?;
        return Ok((json!({ "points": to_json(&lifted) }), vec![csv]));
    }
    // project the component cuts of the configured surface; curves that
    // reach the frame are continued to the point at infinity
    let grid = build_grid(cfg, cfg.source)?;
    let mut curves = Vec::new();
    let mut artifacts = Vec::new();
    for (label, edges) in [("re", &grid.re_cut_edges), ("im", &grid.im_cut_edges)] {
        for (k, comp) in cut_components(&grid, edges).iter().enumerate() {
            let mut plane: Vec<PlanePoint> = comp
                .edges
                .iter()
                .map(|e| {
                    let (x, y) = e.midpoint();
                    let (n, chi) = grid.index_to_params(x, y);
                    PlanePoint::Finite { n, chi }
                })
                .collect();
            if label == "im" && comp.touches_boundary {
                plane.push(PlanePoint::Infinity);
            }
            let lifted = lift_cut(&plane);
            let name = format!("sphere_{label}_cut_{}.csv", k + 1);
            artifacts.push(artifact(&name, |b| write_sphere_curve(&lifted, b))?);
            curves.push(json!({ "component": label, "file": name, "points": lifted.len() }));
        }
    }
    Ok((json!({ "curves": curves }), artifacts))
}

fn ingest_classify(cfg: &RunConfig, path: Option<&PathBuf>) -> Outcome {
    let path = path
        .or(cfg.input.as_ref())
        .ok_or_else(|| CliError::Config("ingest-classify needs an input CSV".into()))?;
    let ds = ingest_csv(path)?;
    let traj = ds.trajectory(cfg.modes.0, cfg.modes.1)?;
    let report = classify_with(&traj, &classify_opts(cfg))?;
    Ok((
        json!({
            "scan_name": ds.scan_name,
            "points": ds.len(),
            "metadata": ds.metadata,
            "class_report": to_json(&report),
        }),
        Vec::new(),
    ))
}
