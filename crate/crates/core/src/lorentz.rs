//! Lorentzian dispersive and absorptive lineshapes of a two-level
//! transition, as functions of the normalized detuning `x = 2*Delta/Gamma`.

use crate::{Error, Result};

/// Dispersive lineshape `Ld(x) = -x / (1 + x^2)`.
#[inline]
pub fn dispersive(x: f64) -> f64 {
    -x / (1.0 + x * x)
}

/// Absorptive lineshape `La(x) = 1 / (1 + x^2)`.
#[inline]
pub fn absorptive(x: f64) -> f64 {
    1.0 / (1.0 + x * x)
}

/// Both lineshapes `(Ld, La)`; they satisfy `Ld^2 + La^2 = La` exactly.
pub fn lorentzians(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!(
            "lorentzians: non-finite detuning {x}"
        )));
    }
    Ok((dispersive(x), absorptive(x)))
}
