//! Run configuration: named presets, JSON config files and flag overrides,
//! merged in that order.

use std::path::PathBuf;

use nhep_core::crossing::AlphaScan;
use nhep_core::monodromy::Loop;
use nhep_core::oracle::AnalyticOracle;
use nhep_core::sphere::PlanePoint;
use nhep_core::surface::DeltaMode;
use nhep_core::toy::{self, ToyParams};
use nhep_core::complex::c;
use nhep_core::Window;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// Which sampler the 2-D commands run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Toy model over `(α, β)`, using `toy` without its `beta`.
    #[default]
    Toy,
    /// `oracle` over `z = p1 + i·p2`.
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Roots of the toy discriminant along `α` at the configured `β`.
    #[default]
    Analytic,
    /// Black-box 2-D search over `window`.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleTask {
    #[default]
    Surface,
    Loop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub toy: ToyParams,
    pub scan: AlphaScan,
    pub search: SearchMode,
    pub alpha_bracket: (f64, f64),
    pub source: Source,
    pub window: Window,
    /// Surface grid `n1 × n2`; the grid EP search uses `grid.0` coarse points.
    pub grid: (usize, usize),
    pub delta_mode: DeltaMode,
    pub beta_window: (f64, f64),
    /// Command-specific convergence tolerance; `None` keeps the library
    /// default.
    pub tolerance: Option<f64>,
    #[serde(rename = "loop")]
    pub loop_path: Loop,
    pub n_steps: usize,
    pub oracle: AnalyticOracle,
    pub oracle_task: OracleTask,
    /// Points for `project`; when empty the cuts of a computed surface are
    /// projected instead.
    pub points: Vec<PlanePoint>,
    pub input: Option<PathBuf>,
    pub modes: (usize, usize),
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            toy: toy::preset("double-ep").expect("built-in preset"),
            scan: AlphaScan::default(),
            search: SearchMode::Analytic,
            alpha_bracket: (0.2, 0.9),
            source: Source::Toy,
            window: Window { p1: (0.3, 0.8), p2: (0.9, 1.0) },
            grid: (256, 64),
            delta_mode: DeltaMode::Delta,
            beta_window: (0.0, 1.0),
            tolerance: None,
            loop_path: Loop::Circle { center: (EP1, 1.0), radius: 0.05 },
            n_steps: 256,
            oracle: AnalyticOracle::TwoPoint { z1: c(EP1, 1.0), z2: c(EP2, 1.0) },
            oracle_task: OracleTask::Surface,
            points: Vec::new(),
            input: None,
            modes: (0, 1),
        }
    }
}

// double-EP roots of the toy model at β = 1
const EP1: f64 = 0.454_145_382_849_234_2;
const EP2: f64 = 0.621_430_791_010_796_9;

// microcavity EPs in (n, χ)
const CAVITY_EP1: (f64, f64) = (2.6257, 0.6001);
const CAVITY_EP2: (f64, f64) = (2.9036, 0.5372);

pub const PRESET_NAMES: &[&str] = &[
    "class1",
    "class2",
    "class3",
    "class3a",
    "class3b",
    "class4",
    "class5",
    "fig2-lz",
    "fig2-wb",
    "double-ep",
    "ep1-loop",
    "ep2-loop",
    "both-ep-loop",
    "beta-c",
    "microcavity-eps",
    "oracle-microcavity",
];

pub fn preset(name: &str) -> Option<RunConfig> {
    let base = RunConfig::default();
    if let Some(toy) = toy::preset(name) {
        return Some(RunConfig { toy, ..base });
    }
    let cfg = match name {
        "ep1-loop" => RunConfig {
            loop_path: Loop::Circle { center: (EP1, 1.0), radius: 0.05 },
            ..base
        },
        "ep2-loop" => RunConfig {
            loop_path: Loop::Circle { center: (EP2, 1.0), radius: 0.05 },
            ..base
        },
        "both-ep-loop" => RunConfig {
            loop_path: Loop::Polyline {
                vertices: vec![(0.35, 0.9), (0.75, 0.9), (0.75, 1.1), (0.35, 1.1)],
            },
            ..base
        },
        "beta-c" => RunConfig {
            toy: toy::preset("fig2-lz").expect("built-in preset"),
            beta_window: (0.0, 1.0),
            ..base
        },
        "microcavity-eps" => RunConfig {
            points: [CAVITY_EP1, CAVITY_EP2]
                .map(|(n, chi)| PlanePoint::Finite { n, chi })
                .to_vec(),
            ..base
        },
        "oracle-microcavity" => RunConfig {
            source: Source::Oracle,
            oracle: AnalyticOracle::TwoPoint {
                z1: c(CAVITY_EP1.0, CAVITY_EP1.1),
                z2: c(CAVITY_EP2.0, CAVITY_EP2.1),
            },
            window: Window { p1: (2.4, 3.1), p2: (0.45, 0.7) },
            grid: (256, 96),
            loop_path: Loop::Circle { center: CAVITY_EP1, radius: 0.05 },
            ..base
        },
        _ => return None,
    };
    Some(cfg)
}

/// Flag values that override the preset and config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub grid: Option<(usize, usize)>,
    pub tolerance: Option<f64>,
    pub input: Option<PathBuf>,
}

/// Recursive JSON merge; objects merge key by key, anything else replaces.
fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                merge(b.entry(k).or_insert(Value::Null), v);
            }
        }
        (b, p) => *b = p,
    }
}

pub fn resolve(
    preset_name: Option<&str>,
    config_json: Option<&str>,
    overrides: &Overrides,
) -> Result<RunConfig, CliError> {
    let base = match preset_name {
        Some(name) => preset(name).ok_or_else(|| {
            CliError::Config(format!("unknown preset {name:?}; known: {}", PRESET_NAMES.join(", ")))
        })?,
        None => RunConfig::default(),
    };
    let mut cfg = base;
    if let Some(text) = config_json {
        let patch: Value =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("config file: {e}")))?;
        if !patch.is_object() {
            return Err(CliError::Config("config file must hold a JSON object".into()));
        }
        // Enum-valued blocks (loop, oracle, points) are replaced whole.
        let mut value = serde_json::to_value(&cfg).expect("config serializes");
        if let (Value::Object(v), Value::Object(p)) = (&mut value, patch) {
            for (k, new) in p {
                match k.as_str() {
                    "loop" | "oracle" | "points" => {
                        v.insert(k, new);
                    }
                    _ => merge(v.entry(k).or_insert(Value::Null), new),
                }
            }
        }
        cfg = serde_json::from_value(value).map_err(|e| CliError::Config(format!("config file: {e}")))?;
    }
    if let Some(grid) = overrides.grid {
        cfg.grid = grid;
    }
    if let Some(tol) = overrides.tolerance {
        cfg.tolerance = Some(tol);
    }
    if let Some(input) = &overrides.input {
        cfg.input = Some(input.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.toy.validate()?;
        self.scan.values()?;
        self.window.validate()?;
        self.loop_path.validate()?;
        self.oracle.validate()?;
        if let Some(tol) = self.tolerance {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(CliError::Config(format!("tolerance must be positive, got {tol}")));
            }
        }
        if self.grid.0 < 16 || self.grid.1 < 16 {
            return Err(CliError::Config(format!("grid must be at least 16x16, got {}x{}", self.grid.0, self.grid.1)));
        }
        if self.n_steps < 64 {
            return Err(CliError::Config(format!("n_steps must be >= 64, got {}", self.n_steps)));
        }
        Ok(())
    }
}

/// Parses `N1xN2`.
pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected <n1>x<n2>, got {s:?}"))?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((n(a)?, n(b)?))
}
