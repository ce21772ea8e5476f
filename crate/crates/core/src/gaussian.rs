//! Gaussian (Holstein-Primakoff) collective-spin state engine:
//! covariance evolution under shear, broadening and rotation,
//! variance-vs-angle, Kitagawa-Ueda and Wineland parameters, and contrast
//! loss with the Bloch-curvature correction.
//!
//! Covariances are stored in SQL units over `(S_y, S_z)`: the coherent
//! spin state is the identity matrix. The spin-unit prefactor `N/4` is
//! applied only at presentation.

use crate::{Error, Result};

/// Gaussian collective-spin state near the equator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianSpinState {
    /// Symmetric covariance over `(S_y, S_z)`; index 0 is `S_y`.
    pub cov: [[f64; 2]; 2],
    /// Normalized mean offsets `(delta_phi, <S_z>)`.
    pub mean_shift: (f64, f64),
    /// Total atom number.
    pub n_atoms: f64,
    /// Mean-spin-length fraction, in (0, 1].
    pub contrast: f64,
}

impl GaussianSpinState {
    /// Coherent spin state of `n` atoms: unit isotropic covariance.
    pub fn css(n: f64) -> Self {
        Self {
            cov: [[1.0, 0.0], [0.0, 1.0]],
            mean_shift: (0.0, 0.0),
            n_atoms: n,
            contrast: 1.0,
        }
    }

    /// Determinant of the covariance matrix.
    pub fn det(&self) -> f64 {
        self.cov[0][0] * self.cov[1][1] - self.cov[0][1] * self.cov[1][0]
    }
}

/// Squeezed/anti-squeezed variance pair (eigenvalues of the covariance).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Xi2 {
    pub minus: f64,
    pub plus: f64,
}

/// Contrast-loss factors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contrast {
    /// Free-space scattering loss `exp(-n_sc/N)`.
    pub scattering: f64,
    /// Bloch-sphere wrapping loss `exp(-Q^2/(2N))`.
    pub bloch: f64,
    /// Product of the two.
    pub total: f64,
}

/// One-pulse squeezing summary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezeOutcome {
    pub q: f64,
    pub f: f64,
    pub delta_phi: f64,
    pub contrast: f64,
    pub xi2_ku: f64,
    pub xi2_wineland: f64,
}

/// Applies one pulse to the state: shear `M = [[1, Q], [0, 1]]`, additive
/// broadening `F` on the `(S_y, S_y)` element, then rotation by `alpha`.
pub fn evolve(state: &GaussianSpinState, q: f64, f: f64, alpha: f64) -> Result<GaussianSpinState> {
    if f < 0.0 {
        return Err(Error::InvalidInput(format!(
            "evolve: broadening F must be >= 0, got {f}"
        )));
    }
    let c = state.cov;
    // M*cov*M^T with M = [[1, Q], [0, 1]].
    let sheared = [
        [
            c[0][0] + q * (c[0][1] + c[1][0]) + q * q * c[1][1],
            c[0][1] + q * c[1][1],
        ],
        [c[1][0] + q * c[1][1], c[1][1]],
    ];
    let broadened = [[sheared[0][0] + f, sheared[0][1]], [sheared[1][0], sheared[1][1]]];
    let (s, co) = alpha.sin_cos();
    let r = [[co, -s], [s, co]];
    let mut rotated = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    rotated[i][j] += r[i][k] * broadened[k][l] * r[j][l];
                }
            }
        }
    }
    Ok(GaussianSpinState {
        cov: rotated,
        ..*state
    })
}

/// `S_z` variance after shearing `Q`, broadening `F` and rotation `alpha`,
/// in SQL units: `1 - Q*sin(2*alpha) + (F + Q^2)*sin^2(alpha)`.
pub fn variance_at_angle(q: f64, f: f64, alpha: f64) -> f64 {
    1.0 - q * (2.0 * alpha).sin() + (f + q * q) * alpha.sin() * alpha.sin()
}

/// Kitagawa-Ueda variances: the eigenvalues of the post-pulse covariance,
/// `xi_pm^2 = [2 + F + Q^2 +- sqrt(4Q^2 + (F+Q^2)^2)]/2`; their product
/// is `1 + F`.
pub fn xi2_ku(q: f64, f: f64) -> Result<Xi2> {
    if f < 0.0 {
        return Err(Error::InvalidInput(format!(
            "xi2_ku: broadening F must be >= 0, got {f}"
        )));
    }
    let a = f + q * q;
    let root = (4.0 * q * q + a * a).sqrt();
    Ok(Xi2 {
        minus: (2.0 + a - root) / 2.0,
        plus: (2.0 + a + root) / 2.0,
    })
}

/// Rotation angle minimizing the `S_z` variance:
/// `tan(alpha) = (sqrt(4Q^2 + (F+Q^2)^2) - (F+Q^2))/(2Q)`.
pub fn optimal_angle(q: f64, f: f64) -> f64 {
    if q == 0.0 {
        return 0.0;
    }
    let a = f + q * q;
    (((4.0 * q * q + a * a).sqrt() - a) / (2.0 * q)).atan()
}

/// Contrast loss factors for shearing `Q` with `n_sc` scattered photons
/// on `N` atoms.
pub fn contrast(q: f64, n_sc: f64, n: f64) -> Result<Contrast> {
    if n < 1.0 {
        return Err(Error::InvalidInput(format!(
            "contrast: atom number must be >= 1, got {n}"
        )));
    }
    let scattering = (-n_sc / n).exp();
    let bloch = (-q * q / (2.0 * n)).exp();
    Ok(Contrast {
        scattering,
        bloch,
        total: scattering * bloch,
    })
}

/// Wineland parameter `xi^2 = xi^2_KU_eff / C^2`.
///
/// With `curvature = false` all Bloch-sphere curvature effects are
/// dropped: `xi^2 = xi_-^2 * exp(2*n_sc/N)`. With `curvature = true` the
/// squeezed eigenvalue gains the broadening term `Q^4/(24 S^2)` and the
/// contrast gains the wrapping factor:
/// `xi^2 = (xi_-^2 + Q^4/(24 S^2)) * exp(2*(n_sc + Q^2/2)/N)`.
pub fn wineland(q: f64, f: f64, n_sc: f64, n: f64, curvature: bool) -> Result<f64> {
    if n < 1.0 {
        return Err(Error::InvalidInput(format!(
            "wineland: atom number must be >= 1, got {n}"
        )));
    }
    let minus = xi2_ku(q, f)?.minus;
    let s = n / 2.0;
    if curvature {
        Ok((minus + q.powi(4) / (24.0 * s * s)) * (2.0 * (n_sc + q * q / 2.0) / n).exp())
    } else {
        Ok(minus * (2.0 * n_sc / n).exp())
    }
}

/// One-pulse squeezing summary from the coherent-effect and information
/// quantities of a pulse.
pub fn squeeze_outcome(
    q: f64,
    f: f64,
    delta_phi: f64,
    n_sc: f64,
    n: f64,
    curvature: bool,
) -> Result<SqueezeOutcome> {
    let ku = xi2_ku(q, f)?.minus;
    let c = contrast(q, n_sc, n)?;
    let (xi2, c_used) = if curvature {
        (wineland(q, f, n_sc, n, true)?, c.total)
    } else {
        (wineland(q, f, n_sc, n, false)?, c.scattering)
    };
    Ok(SqueezeOutcome {
        q,
        f,
        delta_phi,
        contrast: c_used,
        xi2_ku: ku,
        xi2_wineland: xi2,
    })
}
