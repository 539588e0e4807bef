use serde::{Deserialize, Serialize};

use crate::{ComplexScalar, Error, Result};

/// Anything that yields the (unordered) eigenvalue pair at a point of a
/// two-parameter plane: the toy model, an analytic oracle, or interpolated
/// external data.
pub trait PairSampler: Sync {
    fn sample(&self, p1: f64, p2: f64) -> Result<[ComplexScalar; 2]>;
}

impl<F> PairSampler for F
where
    F: Fn(f64, f64) -> Result<[ComplexScalar; 2]> + Sync,
{
    fn sample(&self, p1: f64, p2: f64) -> Result<[ComplexScalar; 2]> {
        self(p1, p2)
    }
}

/// Axis-aligned rectangle `[p1.0, p1.1] × [p2.0, p2.1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub p1: (f64, f64),
    pub p2: (f64, f64),
}

impl Window {
    pub fn new(p1: (f64, f64), p2: (f64, f64)) -> Result<Self> {
        let w = Self { p1, p2 };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a < b;
        if ok(self.p1) && ok(self.p2) {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid window {:?}", self)))
        }
    }

    pub fn width(&self) -> f64 {
        self.p1.1 - self.p1.0
    }

    pub fn height(&self) -> f64 {
        self.p2.1 - self.p2.0
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn contains(&self, p1: f64, p2: f64) -> bool {
        (self.p1.0..=self.p1.1).contains(&p1) && (self.p2.0..=self.p2.1).contains(&p2)
    }

    pub fn clamp(&self, p1: f64, p2: f64) -> (f64, f64) {
        (p1.clamp(self.p1.0, self.p1.1), p2.clamp(self.p2.0, self.p2.1))
    }

    pub fn axis1(&self, n: usize) -> Vec<f64> {
        linspace(self.p1.0, self.p1.1, n)
    }

    pub fn axis2(&self, n: usize) -> Vec<f64> {
        linspace(self.p2.0, self.p2.1, n)
    }
}

/// `n` evenly spaced points with both endpoints hit exactly.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let last = (n - 1) as f64;
            (0..n)
                .map(|k| {
                    if k == n - 1 {
                        end
                    } else {
                        start + (end - start) * (k as f64 / last)
                    }
                })
                .collect()
        }
    }
}

/// Cost-minimizing assignment of an unordered pair to a reference pair.
/// Returns the reordered pair, whether it was swapped, and the cost gap
/// between the two pairings.
pub(crate) fn match_pair(
    reference: &[ComplexScalar; 2],
    pair: [ComplexScalar; 2],
) -> ([ComplexScalar; 2], bool, f64) {
    let keep = (pair[0] - reference[0]).norm() + (pair[1] - reference[1]).norm();
    let swap = (pair[1] - reference[0]).norm() + (pair[0] - reference[1]).norm();
    if swap < keep {
        ([pair[1], pair[0]], true, keep - swap)
    } else {
        (pair, false, swap - keep)
    }
}
