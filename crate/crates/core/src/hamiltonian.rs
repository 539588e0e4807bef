//! The symmetric 2x2 non-Hermitian Hamiltonian and its closed-form spectrum.

use serde::{Deserialize, Serialize};

use crate::complex::{ensure_finite, principal_sqrt, ComplexScalar};
use crate::Result;

/// Below this splitting `|η|` a spectrum is treated as sitting on an EP:
/// the matrix is (numerically) defective and eigenvector residuals are
/// meaningless.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// `H = [[ξ₁, g], [g, ξ₂]]`. Symmetric, and non-Hermitian whenever the
/// diagonal is complex or `Im(g) ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hamiltonian2 {
    pub xi1: ComplexScalar,
    pub xi2: ComplexScalar,
    pub g: ComplexScalar,
}

impl Hamiltonian2 {
    pub fn new(xi1: ComplexScalar, xi2: ComplexScalar, g: ComplexScalar) -> Result<Self> {
        Ok(Self {
            xi1: ensure_finite(xi1, "xi1")?,
            xi2: ensure_finite(xi2, "xi2")?,
            g: ensure_finite(g, "g")?,
        })
    }

    pub fn trace(&self) -> ComplexScalar {
        self.xi1 + self.xi2
    }

    pub fn determinant(&self) -> ComplexScalar {
        self.xi1 * self.xi2 - self.g * self.g
    }

    /// `(λ₊ − λ₋)² = (ξ₁ − ξ₂)² + 4g²`. Single-valued and smooth in the
    /// matrix entries, it vanishes exactly at exceptional points.
    pub fn discriminant(&self) -> ComplexScalar {
        let d = self.xi1 - self.xi2;
        d * d + 4.0 * self.g * self.g
    }

    pub fn matrix(&self) -> [[ComplexScalar; 2]; 2] {
        [[self.xi1, self.g], [self.g, self.xi2]]
    }

    pub fn apply(&self, v: &[ComplexScalar; 2]) -> [ComplexScalar; 2] {
        [
            self.xi1 * v[0] + self.g * v[1],
            self.g * v[0] + self.xi2 * v[1],
        ]
    }

    /// Largest entry modulus, used to scale tolerances.
    pub fn scale(&self) -> f64 {
        self.xi1.norm().max(self.xi2.norm()).max(self.g.norm())
    }
}

/// Per-point result of [`diagonalize`].
///
/// The `+`/`−` labels come from the fixed square-root branch and carry no
/// identity across parameter space; continuation assigns that.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spectrum2 {
    pub lambda_plus: ComplexScalar,
    pub lambda_minus: ComplexScalar,
    pub eta: ComplexScalar,
    pub v_plus: [ComplexScalar; 2],
    pub v_minus: [ComplexScalar; 2],
    /// `|η| < DEGENERACY_THRESHOLD`.
    pub degenerate: bool,
}

impl Spectrum2 {
    pub fn eigenvalues(&self) -> [ComplexScalar; 2] {
        [self.lambda_plus, self.lambda_minus]
    }

    pub fn mean(&self) -> ComplexScalar {
        (self.lambda_plus + self.lambda_minus) * 0.5
    }
}

/// `λ± = (ξ₁+ξ₂)/2 ± η`, `η = √((ξ₁−ξ₂)²/4 + g²)` on the principal branch
/// (`Re η ≥ 0`, ties to `Im η ≥ 0`).
pub fn diagonalize(h: &Hamiltonian2) -> Spectrum2 {
    let half_diff = (h.xi1 - h.xi2) * 0.5;
    let eta = principal_sqrt(half_diff * half_diff + h.g * h.g);
    let mean = (h.xi1 + h.xi2) * 0.5;
    let lambda_plus = mean + eta;
    let lambda_minus = mean - eta;

    let (v_plus, v_minus) = if eta.norm() == 0.0 {
        // Exactly coalesced. With g ≠ 0 the matrix is defective and both
        // labels get the single eigenvector; a scalar matrix keeps the
        // standard basis.
        match eigenvector(h, lambda_plus) {
            Some(v) => (v, v),
            None => (unit(0), unit(1)),
        }
    } else {
        (
            eigenvector(h, lambda_plus).unwrap_or(unit(0)),
            eigenvector(h, lambda_minus).unwrap_or(unit(1)),
        )
    };

    Spectrum2 {
        lambda_plus,
        lambda_minus,
        eta,
        v_plus,
        v_minus,
        degenerate: eta.norm() < DEGENERACY_THRESHOLD,
    }
}

fn unit(k: usize) -> [ComplexScalar; 2] {
    let mut v = [ComplexScalar::new(0.0, 0.0); 2];
    v[k] = ComplexScalar::new(1.0, 0.0);
    v
}

/// Null vector of `H − λ` from whichever row of the adjugate is larger.
fn eigenvector(h: &Hamiltonian2, lambda: ComplexScalar) -> Option<[ComplexScalar; 2]> {
    let a = [h.g, lambda - h.xi1];
    let b = [lambda - h.xi2, h.g];
    let na = a[0].norm_sqr() + a[1].norm_sqr();
    let nb = b[0].norm_sqr() + b[1].norm_sqr();
    let (v, n2) = if na >= nb { (a, na) } else { (b, nb) };
    if n2 == 0.0 || !n2.is_finite() {
        return None;
    }
    let n = n2.sqrt();
    Some([v[0] / n, v[1] / n])
}
