//! Analytic multivalued reference functions with known branch structure.
//!
//! `f(z) = √((z − z₁)(z − z₂))` has two square-root branch points and is the
//! reference topology for a double EP; `(z − z₀)^{1/N}` is the single-EP
//! case. As [`PairSampler`]s they read `(p1, p2)` as `z = p1 + i·p2`.

use serde::{Deserialize, Serialize};

use crate::complex::{c, principal_sqrt, ComplexScalar};
use crate::sampler::PairSampler;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalyticOracle {
    TwoPoint { z1: ComplexScalar, z2: ComplexScalar },
    SinglePoint { z0: ComplexScalar, order: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub values: [ComplexScalar; 2],
    pub at_branch_point: bool,
}

impl AnalyticOracle {
    pub fn two_point(z1: ComplexScalar, z2: ComplexScalar) -> Result<Self> {
        let o = Self::TwoPoint { z1, z2 };
        o.validate()?;
        Ok(o)
    }

    pub fn single_point(z0: ComplexScalar, order: u32) -> Result<Self> {
        let o = Self::SinglePoint { z0, order };
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::TwoPoint { z1, z2 } => {
                if z1 == z2 {
                    return Err(Error::Domain("two-point oracle needs z1 != z2".into()));
                }
            }
            Self::SinglePoint { order, .. } => {
                if order < 2 {
                    return Err(Error::Domain(format!("oracle order must be >= 2, got {order}")));
                }
            }
        }
        Ok(())
    }

    pub fn branch_points(&self) -> Vec<ComplexScalar> {
        match *self {
            Self::TwoPoint { z1, z2 } => vec![z1, z2],
            Self::SinglePoint { z0, .. } => vec![z0],
        }
    }

    /// The two principal-branch values: `±f(z)` for the two-point kind, the
    /// first two of the `N` roots for the single-point kind.
    pub fn eval(&self, z: ComplexScalar) -> OracleValue {
        let zero = c(0.0, 0.0);
        if self.branch_points().contains(&z) {
            return OracleValue {
                values: [zero, zero],
                at_branch_point: true,
            };
        }
        let values = match *self {
            Self::TwoPoint { z1, z2 } => {
                let f = principal_sqrt((z - z1) * (z - z2));
                [f, -f]
            }
            Self::SinglePoint { z0, order } => {
                let n = order as f64;
                let (r, theta) = (z - z0).to_polar();
                let root = ComplexScalar::from_polar(r.powf(1.0 / n), theta / n);
                let turn = ComplexScalar::from_polar(1.0, 2.0 * std::f64::consts::PI / n);
                [root, root * turn]
            }
        };
        OracleValue {
            values,
            at_branch_point: false,
        }
    }
}

pub fn oracle_eval(o: &AnalyticOracle, z: ComplexScalar) -> OracleValue {
    o.eval(z)
}

impl PairSampler for AnalyticOracle {
    fn sample(&self, p1: f64, p2: f64) -> Result<[ComplexScalar; 2]> {
        Ok(self.eval(c(p1, p2)).values)
    }
}
