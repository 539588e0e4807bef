//! Continuation of the eigenvalue pair around closed loops.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::complex::ComplexScalar;
use crate::ep::EpLocation;
use crate::sampler::{match_pair, PairSampler};
use crate::{Error, Result};

/// Closed loop in the `(p1, p2)` plane, traversed from parameter `s = 0` to
/// `s = 1`. Circles run counter-clockwise from angle 0; polylines are closed
/// implicitly back to their first vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Loop {
    Circle { center: (f64, f64), radius: f64 },
    Polyline { vertices: Vec<(f64, f64)> },
}

impl Loop {
    pub fn circle(center: (f64, f64), radius: f64) -> Result<Self> {
        let l = Self::Circle { center, radius };
        l.validate()?;
        Ok(l)
    }

    pub fn polyline(vertices: Vec<(f64, f64)>) -> Result<Self> {
        let l = Self::Polyline { vertices };
        l.validate()?;
        Ok(l)
    }

    /// Axis-aligned rectangle, counter-clockwise from its lower-left corner.
    pub fn rectangle(p1: (f64, f64), p2: (f64, f64)) -> Result<Self> {
        Self::polyline(vec![(p1.0, p2.0), (p1.1, p2.0), (p1.1, p2.1), (p1.0, p2.1)])
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Circle { center, radius } => {
                if !(center.0.is_finite() && center.1.is_finite()) {
                    return Err(Error::NonFinite("loop center"));
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::Domain(format!("loop radius must be positive, got {radius}")));
                }
            }
            Self::Polyline { vertices } => {
                if vertices.iter().any(|v| !(v.0.is_finite() && v.1.is_finite())) {
                    return Err(Error::NonFinite("loop vertex"));
                }
                if self.length() <= 0.0 || vertices.len() < 3 {
                    return Err(Error::Domain("polyline loop needs at least 3 distinct vertices".into()));
                }
            }
        }
        Ok(())
    }

    fn closed_vertices(vertices: &[(f64, f64)]) -> Vec<(f64, f64)> {
        let mut v = vertices.to_vec();
        if let (Some(&first), Some(&last)) = (v.first(), v.last()) {
            if first != last {
                v.push(first);
            }
        }
        v
    }

    pub fn length(&self) -> f64 {
        match self {
            Self::Circle { radius, .. } => TAU * radius,
            Self::Polyline { vertices } => Self::closed_vertices(vertices)
                .windows(2)
                .map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1))
                .sum(),
        }
    }

    /// Point at arc-length fraction `s ∈ [0, 1]`; `point(1) == point(0)`
    /// exactly.
    pub fn point(&self, s: f64) -> (f64, f64) {
        let s = if s >= 1.0 { 0.0 } else { s.max(0.0) };
        match self {
            Self::Circle { center, radius } => {
                if s == 0.0 {
                    return (center.0 + radius, center.1);
                }
                let (sin, cos) = (TAU * s).sin_cos();
                (center.0 + radius * cos, center.1 + radius * sin)
            }
            Self::Polyline { vertices } => {
                let v = Self::closed_vertices(vertices);
                let mut remaining = s * self.length();
                for w in v.windows(2) {
                    let len = (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1);
                    if remaining <= len && len > 0.0 {
                        let t = remaining / len;
                        return (w[0].0 + t * (w[1].0 - w[0].0), w[0].1 + t * (w[1].1 - w[0].1));
                    }
                    remaining -= len;
                }
                v[0]
            }
        }
    }

    /// Winding number of the loop around `p`.
    pub fn winding_number(&self, p: (f64, f64)) -> i32 {
        match self {
            Self::Circle { center, radius } => {
                i32::from((p.0 - center.0).hypot(p.1 - center.1) < *radius)
            }
            Self::Polyline { vertices } => {
                let mut wn = 0;
                for w in Self::closed_vertices(vertices).windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let cross = (b.0 - a.0) * (p.1 - a.1) - (p.0 - a.0) * (b.1 - a.1);
                    if a.1 <= p.1 {
                        if b.1 > p.1 && cross > 0.0 {
                            wn += 1;
                        }
                    } else if b.1 <= p.1 && cross < 0.0 {
                        wn -= 1;
                    }
                }
                wn
            }
        }
    }

    pub fn encloses(&self, p: (f64, f64)) -> bool {
        self.winding_number(p) != 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Permutation {
    Identity,
    Swap,
}

impl Permutation {
    pub fn then(self, other: Permutation) -> Permutation {
        if self == other {
            Permutation::Identity
        } else {
            Permutation::Swap
        }
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Permutation::Identity => "identity",
            Permutation::Swap => "swap",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopResult {
    pub permutation: Permutation,
    /// Accepted continuation steps.
    pub n_steps: usize,
    /// Largest accepted `max(|Δλ₁|, |Δλ₂|)` relative to the gap before it.
    pub max_step_jump: f64,
    pub enclosed_eps: Vec<EpLocation>,
    pub start: [ComplexScalar; 2],
    pub end: [ComplexScalar; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopOptions {
    /// Initial number of uniform steps (≥ 64).
    pub n_steps: usize,
    /// Halve the step while a jump exceeds this fraction of the current gap.
    pub jump_fraction: f64,
    /// Smallest allowed step as a fraction of the loop.
    pub min_step: f64,
    /// Relative tolerance for deciding identity vs. swap on return.
    pub closure_tol: f64,
}

impl Default for LoopOptions {
    fn default() -> Self {
        Self {
            n_steps: 256,
            jump_fraction: 0.2,
            min_step: 1e-9,
            closure_tol: 1e-8,
        }
    }
}

pub fn encircle(sampler: &impl PairSampler, lp: &Loop, n_steps: usize) -> Result<LoopResult> {
    let opts = LoopOptions {
        n_steps,
        ..LoopOptions::default()
    };
    encircle_with(sampler, lp, &opts, &[])
}

/// `known_eps` only feeds the informational `enclosed_eps` field.
pub fn encircle_with(
    sampler: &impl PairSampler,
    lp: &Loop,
    opts: &LoopOptions,
    known_eps: &[EpLocation],
) -> Result<LoopResult> {
    lp.validate()?;
    if opts.n_steps < 64 {
        return Err(Error::Domain(format!("n_steps must be >= 64, got {}", opts.n_steps)));
    }
    let (x0, y0) = lp.point(0.0);
    let start = sampler.sample(x0, y0)?;
    let (end, n_steps, max_step_jump) = continue_along(sampler, lp, start, opts)?;

    let scale = start[0].norm().max(start[1].norm()).max(1.0);
    let tol = opts.closure_tol * scale;
    let close = |a: ComplexScalar, b: ComplexScalar| (a - b).norm() <= tol;
    let permutation = if close(end[0], start[0]) && close(end[1], start[1]) {
        Permutation::Identity
    } else if close(end[0], start[1]) && close(end[1], start[0]) {
        Permutation::Swap
    } else {
        return Err(Error::LoopNotClosed);
    };

    Ok(LoopResult {
        permutation,
        n_steps,
        max_step_jump,
        enclosed_eps: known_eps
            .iter()
            .filter(|e| lp.encloses((e.p1, e.p2)))
            .copied()
            .collect(),
        start,
        end,
    })
}

/// Continues `initial` (the pair at `s = 0`) once around the loop and
/// returns the continued pair at `s = 1`, the accepted step count and the
/// largest relative jump.
pub fn continue_along(
    sampler: &impl PairSampler,
    lp: &Loop,
    initial: [ComplexScalar; 2],
    opts: &LoopOptions,
) -> Result<([ComplexScalar; 2], usize, f64)> {
    let base = 1.0 / opts.n_steps as f64;
    let mut current = initial;
    let mut s = 0.0;
    let mut ds = base;
    let mut steps = 0;
    let mut max_jump: f64 = 0.0;
    while s < 1.0 {
        let next_s = (s + ds).min(1.0);
        let (x, y) = lp.point(next_s);
        let (next, _, _) = match_pair(&current, sampler.sample(x, y)?);
        let gap = (current[0] - current[1]).norm();
        let jump = (next[0] - current[0]).norm().max((next[1] - current[1]).norm());
        if jump > opts.jump_fraction * gap {
            ds *= 0.5;
            if ds < opts.min_step {
                return Err(Error::LoopTooCloseToEp { s });
            }
            continue;
        }
        if gap > 0.0 {
            max_jump = max_jump.max(jump / gap);
        }
        current = next;
        s = next_s;
        steps += 1;
        ds = (ds * 2.0).min(base);
    }
    Ok((current, steps, max_jump))
}
