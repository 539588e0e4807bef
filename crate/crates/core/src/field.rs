//! Coalescence observables on discretized states.

use crate::complex::{ensure_finite, ComplexScalar};
use crate::{Error, Result};

/// Sampled state `ψ` with quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteField {
    samples: Vec<ComplexScalar>,
    weights: Vec<f64>,
}

impl DiscreteField {
    pub fn new(samples: Vec<ComplexScalar>, weights: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::LengthMismatch("field needs at least one sample".into()));
        }
        if samples.len() != weights.len() {
            return Err(Error::LengthMismatch(format!(
                "{} samples vs {} weights",
                samples.len(),
                weights.len()
            )));
        }
        for &s in &samples {
            ensure_finite(s, "field sample")?;
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Domain("weights must be positive and finite".into()));
        }
        Ok(Self { samples, weights })
    }

    pub fn uniform(samples: Vec<ComplexScalar>) -> Result<Self> {
        let n = samples.len();
        Self::new(samples, vec![1.0; n])
    }

    pub fn samples(&self) -> &[ComplexScalar] {
        &self.samples
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn norm_sqr(&self) -> f64 {
        self.samples
            .iter()
            .zip(&self.weights)
            .map(|(s, w)| w * s.norm_sqr())
            .sum()
    }
}

/// `O_L = |Σ w·conj(f₁)·f₂| / (X₁X₂)` with `X = √(Σ w|f|²)`.
pub fn overlap(f1: &DiscreteField, f2: &DiscreteField) -> Result<f64> {
    if f1.len() != f2.len() {
        return Err(Error::LengthMismatch(format!(
            "overlap of fields with {} and {} samples",
            f1.len(),
            f2.len()
        )));
    }
    let (n1, n2) = (f1.norm_sqr(), f2.norm_sqr());
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::DegenerateField);
    }
    let inner: ComplexScalar = f1
        .samples
        .iter()
        .zip(&f2.samples)
        .zip(&f1.weights)
        .map(|((a, b), w)| a.conj() * b * *w)
        .sum();
    Ok(inner.norm() / (n1.sqrt() * n2.sqrt()))
}

/// Shannon entropy (natural log) of `ρ = w|f|² / Σ w|f|²`.
pub fn shannon_entropy(f: &DiscreteField) -> Result<f64> {
    let total = f.norm_sqr();
    if total == 0.0 {
        return Err(Error::DegenerateField);
    }
    Ok(f
        .samples
        .iter()
        .zip(&f.weights)
        .map(|(s, w)| w * s.norm_sqr() / total)
        .filter(|&rho| rho > 0.0)
        .map(|rho| -rho * rho.ln())
        .sum())
}

/// Overlap of two 2-component state vectors with unit weights.
pub fn vector_overlap(a: &[ComplexScalar; 2], b: &[ComplexScalar; 2]) -> Result<f64> {
    overlap(
        &DiscreteField::uniform(a.to_vec())?,
        &DiscreteField::uniform(b.to_vec())?,
    )
}

/// Entropy of the component intensities of a 2-component state.
pub fn vector_entropy(v: &[ComplexScalar; 2]) -> Result<f64> {
    shannon_entropy(&DiscreteField::uniform(v.to_vec())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::c;

    fn field(v: &[(f64, f64)]) -> DiscreteField {
        DiscreteField::uniform(v.iter().map(|&(r, i)| c(r, i)).collect()).unwrap()
    }

    #[test]
    fn orthogonal_and_self_overlap() {
        assert_eq!(overlap(&field(&[(1.0, 0.0), (0.0, 0.0)]), &field(&[(0.0, 0.0), (1.0, 0.0)])).unwrap(), 0.0);
        let f = field(&[(0.6, 0.0), (0.0, 0.8)]);
        assert!((overlap(&f, &f).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        let u = field(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]);
        assert!((shannon_entropy(&u).unwrap() - 4f64.ln()).abs() < 1e-15);
        let d = field(&[(0.0, 0.0), (2.0, 0.0), (0.0, 0.0)]);
        assert_eq!(shannon_entropy(&d).unwrap(), 0.0);
        // mpmath: −¾ln¾ − ¼ln¼
        let f = field(&[(0.75f64.sqrt(), 0.0), (0.25f64.sqrt(), 0.0)]);
        assert!((shannon_entropy(&f).unwrap() - 0.562_335_144_618_808_35).abs() < 1e-15);
    }

    #[test]
    fn weighted_entropy_matches_duplicated_samples() {
        let w = DiscreteField::new(vec![c(1.0, 0.0), c(1.0, 0.0)], vec![2.0, 1.0]).unwrap();
        let dup = field(&[(1.0, 0.0), (1.0, 0.0), (1.0, 0.0)]);
        assert!((shannon_entropy(&w).unwrap() - (-(2.0f64 / 3.0) * (2.0f64 / 3.0).ln() - (1.0 / 3.0) * (1.0f64 / 3.0).ln())).abs() < 1e-15);
        assert!((shannon_entropy(&dup).unwrap() - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_and_invalid_fields() {
        let z = field(&[(0.0, 0.0), (0.0, 0.0)]);
        let f = field(&[(1.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(overlap(&z, &f), Err(Error::DegenerateField)));
        assert!(matches!(shannon_entropy(&z), Err(Error::DegenerateField)));
        assert!(overlap(&f, &field(&[(1.0, 0.0)])).is_err());
        assert!(DiscreteField::new(vec![c(1.0, 0.0)], vec![0.0]).is_err());
        assert!(DiscreteField::new(vec![], vec![]).is_err());
    }
}
