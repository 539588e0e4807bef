use num_complex::Complex64;

use crate::{Error, Result};

/// Base numeric type of the crate.
pub type ComplexScalar = Complex64;

/// The imaginary unit.
pub const I: ComplexScalar = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

#[inline]
pub fn is_finite(z: ComplexScalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub(crate) fn ensure_finite(z: ComplexScalar, what: &'static str) -> Result<ComplexScalar> {
    if is_finite(z) {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Principal square root with a fully deterministic branch: `Re ≥ 0`, and
/// `Im ≥ 0` whenever `Re = 0` (including inputs on the negative real axis
/// carrying a signed zero imaginary part).
pub fn principal_sqrt(z: ComplexScalar) -> ComplexScalar {
    if z.re == 0.0 && z.im == 0.0 {
        return c(0.0, 0.0);
    }
    let t = ((z.re.abs() + z.re.hypot(z.im)) * 0.5).sqrt();
    if z.re >= 0.0 {
        c(t, z.im / (2.0 * t))
    } else {
        let im = if z.im < 0.0 { -t } else { t };
        c(z.im.abs() / (2.0 * t), im)
    }
}
