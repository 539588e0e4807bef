//! The parametrized two-level toy model.
//!
//! Diagonal entries follow `ξ₁ = (1 − α/2) + iγ₁`, `ξ₂ = √α + iγ₂`, and the
//! coupling is the convex combination of a real and an imaginary coefficient,
//! damped by the level distance:
//!
//! ```text
//! g(α, β) = g_c [(1 − β) + iβ] Λ_α,     Λ_α = exp[−(ξ₁ − ξ₂)²]
//! ```
//!
//! `β = 0` is Hermitian-like (real) coupling and produces Landau–Zener
//! avoided crossings; `β = 1` is purely imaginary coupling and produces
//! width bifurcation with a pair of exceptional points.

use serde::{Deserialize, Serialize};

use crate::complex::{c, ComplexScalar};
use crate::hamiltonian::{diagonalize, Hamiltonian2};
use crate::sampler::PairSampler;
use crate::{Error, Result};

/// What enters the exponent of `Λ_α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SensitivityMode {
    /// `exp[−(ξ₁ − ξ₂)²]` with the complex diagonal entries.
    #[default]
    #[serde(rename = "full-complex-difference")]
    FullComplex,
    /// `exp[−(ξ₁ʳ − ξ₂ʳ)²]`, always real.
    #[serde(rename = "real-part-difference")]
    RealPart,
}

/// Model parameters except the mixing coefficient `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToyModel {
    pub g_c: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    #[serde(default)]
    pub sensitivity: SensitivityMode,
}

/// Full parameter set with `0 ≤ β ≤ 1` and `g_c > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToyParams {
    pub g_c: f64,
    pub beta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    #[serde(default)]
    pub sensitivity: SensitivityMode,
}

impl ToyModel {
    pub fn new(g_c: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        let m = Self {
            g_c,
            gamma1,
            gamma2,
            sensitivity: SensitivityMode::default(),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn with_sensitivity(mut self, mode: SensitivityMode) -> Self {
        self.sensitivity = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g_c.is_finite() && self.g_c > 0.0) {
            return Err(Error::Domain(format!("g_c must be positive, got {}", self.g_c)));
        }
        if !(self.gamma1.is_finite() && self.gamma2.is_finite()) {
            return Err(Error::NonFinite("gamma"));
        }
        Ok(())
    }

    pub fn with_beta(&self, beta: f64) -> Result<ToyParams> {
        let p = ToyParams {
            g_c: self.g_c,
            beta,
            gamma1: self.gamma1,
            gamma2: self.gamma2,
            sensitivity: self.sensitivity,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn xi(&self, alpha: f64) -> Result<(ComplexScalar, ComplexScalar)> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::Domain(format!("alpha must be >= 0, got {alpha}")));
        }
        Ok((c(1.0 - alpha / 2.0, self.gamma1), c(alpha.sqrt(), self.gamma2)))
    }

    pub fn sensitivity_factor(&self, alpha: f64) -> Result<ComplexScalar> {
        let (xi1, xi2) = self.xi(alpha)?;
        let d = match self.sensitivity {
            SensitivityMode::FullComplex => xi1 - xi2,
            SensitivityMode::RealPart => c(xi1.re - xi2.re, 0.0),
        };
        Ok((-(d * d)).exp())
    }

    /// Coupling at an arbitrary real `β`. Values outside `[0, 1]` leave the
    /// convex segment but are needed to close loops around EPs at `β = 1`.
    pub fn coupling(&self, alpha: f64, beta: f64) -> Result<ComplexScalar> {
        Ok(self.g_c * c(1.0 - beta, beta) * self.sensitivity_factor(alpha)?)
    }

    /// Hamiltonian at any point `(α, β)` of the plane.
    pub fn hamiltonian(&self, alpha: f64, beta: f64) -> Result<Hamiltonian2> {
        if !beta.is_finite() {
            return Err(Error::NonFinite("beta"));
        }
        let (xi1, xi2) = self.xi(alpha)?;
        Hamiltonian2::new(xi1, xi2, self.coupling(alpha, beta)?)
    }
}

impl PairSampler for ToyModel {
    /// `p1 = α`, `p2 = β`.
    fn sample(&self, alpha: f64, beta: f64) -> Result<[ComplexScalar; 2]> {
        Ok(diagonalize(&self.hamiltonian(alpha, beta)?).eigenvalues())
    }
}

impl ToyParams {
    pub fn new(g_c: f64, beta: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        ToyModel::new(g_c, gamma1, gamma2)?.with_beta(beta)
    }

    pub fn with_sensitivity(mut self, mode: SensitivityMode) -> Self {
        self.sensitivity = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.model().validate()?;
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::Domain(format!("beta must lie in [0, 1], got {}", self.beta)));
        }
        Ok(())
    }

    pub fn model(&self) -> ToyModel {
        ToyModel {
            g_c: self.g_c,
            gamma1: self.gamma1,
            gamma2: self.gamma2,
            sensitivity: self.sensitivity,
        }
    }
}

/// `(ξ₁(α), ξ₂(α))`.
pub fn xi(alpha: f64, p: &ToyParams) -> Result<(ComplexScalar, ComplexScalar)> {
    p.model().xi(alpha)
}

/// `g(α, β)` for the configured `β`.
pub fn coupling(alpha: f64, p: &ToyParams) -> Result<ComplexScalar> {
    p.model().coupling(alpha, p.beta)
}

pub fn build_hamiltonian(alpha: f64, p: &ToyParams) -> Result<Hamiltonian2> {
    p.model().hamiltonian(alpha, p.beta)
}

/// Named parameter sets: the five crossing classes, the β-transition scan
/// and the double-EP configuration.
pub const PRESET_NAMES: &[&str] = &[
    "class1", "class2", "class3", "class3a", "class3b", "class4", "class5", "fig2-lz", "fig2-wb",
    "double-ep",
];

pub fn preset(name: &str) -> Option<ToyParams> {
    let p = |g_c, beta, gamma1, gamma2| ToyParams {
        g_c,
        beta,
        gamma1,
        gamma2,
        sensitivity: SensitivityMode::default(),
    };
    Some(match name {
        "class1" => p(0.043, 0.76, 1.05, 1.07),
        "class2" => p(0.043, 0.78, 1.05, 1.07),
        "class3" | "class3a" => p(0.043, 1.0, 1.05, 1.07),
        "class3b" => p(0.043, 1.0, 1.07, 1.05),
        "class4" => p(0.043, 0.78, 1.07, 1.05),
        "class5" => p(0.043, 0.76, 1.07, 1.05),
        "fig2-lz" => p(0.043, 0.0, 1.05, 1.07),
        "fig2-wb" => p(0.043, 1.0, 1.05, 1.07),
        "double-ep" => p(0.05, 1.0, 1.05, 1.05),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(g_c: f64, beta: f64, g1: f64, g2: f64) -> ToyParams {
        ToyParams::new(g_c, beta, g1, g2).unwrap()
    }

    #[test]
    fn xi_examples() {
        let p = params(0.05, 0.0, 0.0, 0.0);
        let (a, b) = xi(0.0, &p).unwrap();
        assert_eq!((a, b), (c(1.0, 0.0), c(0.0, 0.0)));

        let cross = (3f64.sqrt() - 1.0).powi(2);
        let p = params(0.05, 0.0, 1.05, 1.05);
        let (a, b) = xi(cross, &p).unwrap();
        assert!((a.re - b.re).abs() < 1e-15);

        let p = params(0.05, 0.0, 1.05, 1.07);
        let (a, b) = xi(1.0, &p).unwrap();
        assert_eq!(a, c(0.5, 1.05));
        assert_eq!(b, c(1.0, 1.07));
    }

    #[test]
    fn negative_alpha_is_domain_error() {
        let p = params(0.05, 0.0, 0.0, 0.0);
        assert!(matches!(xi(-0.1, &p), Err(Error::Domain(_))));
        assert!(coupling(-0.1, &p).is_err());
        assert!(build_hamiltonian(-1e-12, &p).is_err());
    }

    #[test]
    fn coupling_examples() {
        let cross = (3f64.sqrt() - 1.0).powi(2);
        let p = params(0.05, 0.0, 1.05, 1.05);
        assert!((coupling(cross, &p).unwrap() - c(0.05, 0.0)).norm() < 1e-15);
        // mpmath: 0.05·e^{−1/4}
        let g = coupling(1.0, &p).unwrap();
        assert!((g - c(0.038_940_039_153_570_243, 0.0)).norm() < 1e-16);
        let p = params(0.05, 1.0, 1.05, 1.07).with_sensitivity(SensitivityMode::RealPart);
        assert_eq!(coupling(0.7, &p).unwrap().re, 0.0);
    }

    #[test]
    fn real_part_mode_gives_real_sensitivity() {
        let p = params(0.05, 0.0, 1.05, 1.07).with_sensitivity(SensitivityMode::RealPart);
        assert_eq!(p.model().sensitivity_factor(0.3).unwrap().im, 0.0);
        let full = params(0.05, 0.0, 1.05, 1.07);
        assert!(full.model().sensitivity_factor(0.3).unwrap().im.abs() > 0.0);
    }

    #[test]
    fn param_validation() {
        assert!(ToyParams::new(0.05, 1.2, 1.0, 1.0).is_err());
        assert!(ToyParams::new(0.0, 0.5, 1.0, 1.0).is_err());
        assert!(ToyParams::new(0.05, -0.01, 1.0, 1.0).is_err());
        for name in PRESET_NAMES {
            preset(name).unwrap().validate().unwrap();
        }
        assert!(preset("class6").is_none());
    }

    #[test]
    fn double_ep_points_have_small_splitting() {
        let p = preset("double-ep").unwrap();
        // mpmath roots of the discriminant
        for alpha in [0.454_145_382_849_234_2, 0.621_430_791_010_796_9] {
            let s = diagonalize(&build_hamiltonian(alpha, &p).unwrap());
            assert!(s.eta.norm() < 1e-6, "alpha {alpha}: |eta| = {}", s.eta.norm());
        }
        let lz = preset("fig2-lz").unwrap();
        let h = build_hamiltonian(0.1, &lz).unwrap();
        let mix = h.g / lz.model().sensitivity_factor(0.1).unwrap();
        assert!(mix.im.abs() < 1e-18 && mix.re > 0.0);
    }
}
