//! Stereographic projection between the extended parameter plane and the
//! unit sphere, projecting from the north pole `(0, 0, 1)`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Point of the extended plane `n + iχ`, including the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanePoint {
    Finite { n: f64, chi: f64 },
    Infinity,
}

impl PlanePoint {
    pub fn finite(n: f64, chi: f64) -> Self {
        Self::Finite { n, chi }
    }
}

/// `(ñ, χ̃, ξ̃)` on the unit sphere; `ξ̃` is the auxiliary axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub tn: f64,
    pub tchi: f64,
    pub txi: f64,
}

pub const NORTH_POLE: SpherePoint = SpherePoint { tn: 0.0, tchi: 0.0, txi: 1.0 };

const UNIT_TOL: f64 = 1e-9;

impl SpherePoint {
    pub fn new(tn: f64, tchi: f64, txi: f64) -> Self {
        Self { tn, tchi, txi }
    }

    pub fn norm(&self) -> f64 {
        (self.tn * self.tn + self.tchi * self.tchi + self.txi * self.txi).sqrt()
    }

    pub fn distance(&self, other: &SpherePoint) -> f64 {
        let d = [self.tn - other.tn, self.tchi - other.tchi, self.txi - other.txi];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }
}

/// Inverse projection `Π⁻¹`. Total: infinity lands on the north pole.
pub fn to_sphere(p: PlanePoint) -> SpherePoint {
    match p {
        PlanePoint::Infinity => NORTH_POLE,
        PlanePoint::Finite { n, chi } => {
            let r2 = n * n + chi * chi;
            if !r2.is_finite() {
                return NORTH_POLE;
            }
            let zeta = r2 + 1.0;
            SpherePoint::new(2.0 * n / zeta, 2.0 * chi / zeta, (r2 - 1.0) / zeta)
        }
    }
}

/// Projection `Π`. The north pole maps to [`PlanePoint::Infinity`].
pub fn to_plane(s: SpherePoint) -> Result<PlanePoint> {
    let norm = s.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::Domain(format!("sphere point is not unit norm (|s| = {norm})")));
    }
    if s.txi == 1.0 {
        return Ok(PlanePoint::Infinity);
    }
    let d = 1.0 - s.txi;
    Ok(PlanePoint::finite(s.tn / d, s.tchi / d))
}

/// Pointwise lift of a plane curve (e.g. a sampled branch cut).
pub fn lift_cut(curve: &[PlanePoint]) -> Vec<SpherePoint> {
    curve.iter().map(|&p| to_sphere(p)).collect()
}
