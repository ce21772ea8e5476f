//! Quantum Fisher information of parameter-dependent coherent states,
//! total and amplitude/phase-split QFI of the cavity output, measurement
//! Fisher information, the two-sideband chirp probe, and the detection
//! variance including Raman spin-flip noise.
//!
//! Spin conventions: the squeezing-side quantities ([`total_f`] and its
//! derivative route) use `N_up = Sz + S` (so `dN_up/dSz = 1`); the
//! measurement-side quantities ([`measurement_fisher`], [`chirp_fisher`],
//! [`detection_variance`]) use `Sz = N_up - N_down` at fixed total `N`
//! (so `dN_up/dSz = 1/2`, `dN_down/dSz = -1/2`). All acceptance-level
//! results are ratios or normalized quantities for which the choice
//! cancels; the convention is recorded here so intermediate values can be
//! reproduced.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cavity::{AtomParams, CavityParams, ProbePoint};
use crate::engine::Transitions;
use crate::fourlevel::RamanModel;
use crate::lorentz::absorptive;
use crate::spinlight::PhotonBudget;
use crate::{Error, Result};

/// Amplitude/phase decomposition of a coherent-state QFI.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QfiBreakdown {
    /// Total QFI `4|dalpha/dx|^2`.
    pub total: f64,
    /// Amplitude component `4 (d|alpha|/dx)^2`.
    pub amplitude: f64,
    /// Phase component `4 |alpha|^2 (d arg(alpha)/dx)^2`.
    pub phase: f64,
    /// Set when `alpha = 0` made the phase component undefined; the full
    /// QFI is then reported as amplitude.
    pub amplitude_only: bool,
}

impl QfiBreakdown {
    /// Normalized QFI `(2/S) * total`.
    pub fn normalized(&self, s: f64) -> f64 {
        2.0 / s * self.total
    }
}

/// QFI of a coherent state about the parameter `x`, `F_Q = 4|dalpha/dx|^2`.
pub fn coherent_qfi(dalpha_dx: Complex64) -> f64 {
    4.0 * dalpha_dx.norm_sqr()
}

/// Splits the coherent-state QFI into amplitude and phase components,
/// `F_A = 4 (dA/dx)^2`, `F_phi = 4 A^2 (dphi/dx)^2`; their sum is the
/// total QFI exactly.
pub fn qfi_split(alpha: Complex64, dalpha_dx: Complex64) -> QfiBreakdown {
    let total = coherent_qfi(dalpha_dx);
    let a = alpha.norm();
    if a == 0.0 {
        return QfiBreakdown {
            total,
            amplitude: total,
            phase: 0.0,
            amplitude_only: true,
        };
    }
    // d|alpha|/dx = Re(conj(alpha)*dalpha)/|alpha|;
    // d arg/dx = Im(conj(alpha)*dalpha)/|alpha|^2.
    let inner = alpha.conj() * dalpha_dx;
    let amplitude = 4.0 * (inner.re / a) * (inner.re / a);
    let phase = 4.0 * (inner.im / a) * (inner.im / a);
    QfiBreakdown {
        total,
        amplitude,
        phase,
        amplitude_only: false,
    }
}

/// Normalized total QFI about `Sz` per pulse (closed form),
/// `F = 2*n_sc*eta*La(x_a)*(1 + x_a^2 + S*eta/2)*T0` with `S = N_up` at
/// the equator.
pub fn total_f(_cav: &CavityParams, atoms: &AtomParams, p: &ProbePoint, budget: &PhotonBudget) -> f64 {
    let s_eta = p.n_up * atoms.eta;
    let t0 = Transitions::single(s_eta, atoms.eta).t0(p.x_a, p.x_c);
    2.0 * budget.n_sc
        * atoms.eta
        * absorptive(p.x_a)
        * (1.0 + p.x_a * p.x_a + s_eta / 2.0)
        * t0
}

/// Unsimplified route to the normalized total QFI: per input photon,
/// `(S/2) * 4 * (T1 + T2 + (pi/finesse)*N_up*eta*La) * |d e_c/d Sz|^2`
/// with `dN_up/dSz = 1`, scaled by the input photon number.
pub fn total_f_derivative_route(
    cav: &CavityParams,
    atoms: &AtomParams,
    p: &ProbePoint,
    budget: &PhotonBudget,
) -> f64 {
    let tr = Transitions::single(p.n_up * atoms.eta, atoms.eta);
    let t0 = tr.t0(p.x_a, p.x_c);
    let (da, db) = tr.d_denominator(p.x_a, &[1.0]);
    let e_c = tr.cavity_field(p.x_a, p.x_c, cav.t1, cav.finesse());
    let dec_sq = e_c.norm_sqr() * (da * da + db * db) * t0;
    let scat = PI / cav.finesse() * p.n_up * atoms.eta * absorptive(p.x_a);
    let s = p.n_up;
    (s / 2.0) * 4.0 * (cav.t1 + cav.t2 + scat) * dec_sq * budget.n_in
}

/// Which output ports contribute to the measured Fisher information.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TTotMode {
    /// Only transmitted photons are detected (`T_tot = T2`).
    Transmission,
    /// Transmitted and reflected photons (`T_tot ~ T1 + T2`).
    TransmissionReflection,
}

/// Two balanced modulation sidebands at `+-omega_m` around the carrier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chirp {
    /// Modulation angular frequency.
    pub omega_m: f64,
}

/// Detection configuration for the measurement-side operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectionSetup {
    pub t_tot_mode: TTotMode,
    /// Detection quantum efficiency, in (0, 1].
    pub q_eff: f64,
    pub chirp: Option<Chirp>,
}

impl DetectionSetup {
    pub fn validate(&self) -> Result<()> {
        if !(self.q_eff > 0.0 && self.q_eff <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "detection setup: q_eff must be in (0, 1], got {}",
                self.q_eff
            )));
        }
        Ok(())
    }

    fn t_tot(&self, cav: &CavityParams) -> f64 {
        match self.t_tot_mode {
            TTotMode::Transmission => cav.t2,
            TTotMode::TransmissionReflection => cav.t1 + cav.t2,
        }
    }
}

/// Transitions at the equator (`N_down = N_up`); four-level when the
/// second transition couples, three-level otherwise.
pub(crate) fn equator_transitions(atoms: &AtomParams, n_up: f64) -> Transitions {
    if atoms.eta_down > 0.0 {
        Transitions::pair(
            n_up * atoms.eta_up,
            atoms.eta_up,
            n_up * atoms.eta_down,
            atoms.eta_down,
            atoms.b(),
        )
    } else {
        Transitions::single(n_up * atoms.eta_up, atoms.eta_up)
    }
}

/// `|d e/d Sz|^2` for a field `e = const/(A - iB)`:
/// `|e|^2 (dA^2 + dB^2) T0` with the measurement-side signs
/// `dN_up/dSz = 1/2`, `dN_down/dSz = -1/2`.
fn dec_sq_measurement(tr: &Transitions, e: Complex64, x_a: f64, x_c: f64) -> f64 {
    let signs: Vec<f64> = tr.terms.iter().enumerate().map(|(i, _)| if i == 0 { 0.5 } else { -0.5 }).collect();
    let (da, db) = tr.d_denominator(x_a, &signs);
    e.norm_sqr() * (da * da + db * db) * tr.t0(x_a, x_c)
}

/// Measurement Fisher information about `Sz` carried by the detected
/// output, `q * 4 * T_tot * |d e_c/d Sz|^2 * n_in`, at the probe point.
pub fn measurement_fisher(
    cav: &CavityParams,
    atoms: &AtomParams,
    p: &ProbePoint,
    setup: &DetectionSetup,
    budget: &PhotonBudget,
) -> Result<f64> {
    setup.validate()?;
    let tr = equator_transitions(atoms, p.n_up);
    let e_c = tr.cavity_field(p.x_a, p.x_c, cav.t1, cav.finesse());
    let dec_sq = dec_sq_measurement(&tr, e_c, p.x_a, p.x_c);
    Ok(setup.q_eff * 4.0 * setup.t_tot(cav) * dec_sq * budget.n_in)
}

/// The probe point of sideband `s` (`+-1`): offset by `s*omega_m` in both
/// normalized detunings.
fn sideband_point(p: &ProbePoint, atoms: &AtomParams, kappa: f64, s: f64, omega_m: f64) -> (f64, f64) {
    (
        p.x_a + 2.0 * s * omega_m / atoms.gamma,
        p.x_c + 2.0 * s * omega_m / kappa,
    )
}

/// Total QFI about `Sz` of a two-sideband chirp probe: the sum of the
/// per-sideband coherent-state QFIs of the transmitted field, each
/// sideband carrying half the input photons.
pub fn chirp_fisher(
    cav: &CavityParams,
    atoms: &AtomParams,
    p: &ProbePoint,
    setup: &DetectionSetup,
    budget: &PhotonBudget,
) -> Result<f64> {
    setup.validate()?;
    let chirp = setup.chirp.ok_or_else(|| {
        Error::InvalidInput("chirp_fisher: setup.chirp (omega_m) is required".into())
    })?;
    let kappa = cav.kappa()?;
    let tr = equator_transitions(atoms, p.n_up);
    let mut total = 0.0;
    for s in [1.0, -1.0] {
        let (x_a, x_c) = sideband_point(p, atoms, kappa, s, chirp.omega_m);
        let e_t = tr.transmitted_field(x_a, x_c, cav.t1, cav.t2, cav.finesse());
        // alpha_s = sqrt(n_in/2) * e_t; QFI adds over independent modes.
        total += 4.0 * (budget.n_in / 2.0) * dec_sq_measurement(&tr, e_t, x_a, x_c);
    }
    Ok(total)
}

/// Per-input-photon detection quantities and the resulting `Sz`-readout
/// variance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectionVariance {
    /// Readout variance in SQL units.
    pub sigma_sq: f64,
    /// Detected photon number `q * n_t_per_photon * n_in`.
    pub n_detected: f64,
    /// SQL-normalized measurement Fisher information per input photon.
    pub fisher_sql_per_photon: f64,
    /// Transmitted photons per input photon (sideband-averaged).
    pub n_t_per_photon: f64,
    /// Photons Raman-scattered on the down transition per input photon.
    pub n_sc_down_per_photon: f64,
}

/// Variance of the `Sz` readout in SQL units:
/// `sigma_d^2 = 1/(1 + q*Fhat*n_in) + 4*branching*nhat_sc_down*n_in/N`,
/// with `Fhat = (N/4)*4*T_tot*|d e_c/d Sz|^2` per input photon, averaged
/// over the two chirp sidebands when present.
pub fn detection_variance(
    cav: &CavityParams,
    atoms: &AtomParams,
    p: &ProbePoint,
    setup: &DetectionSetup,
    budget: &PhotonBudget,
    raman: &RamanModel,
) -> Result<DetectionVariance> {
    setup.validate()?;
    raman.validate()?;
    let kappa = cav.kappa()?;
    let tr = equator_transitions(atoms, p.n_up);
    let n = 2.0 * p.n_up;
    let t_tot = setup.t_tot(cav);
    let points: Vec<(f64, f64)> = match setup.chirp {
        Some(chirp) => [1.0, -1.0]
            .iter()
            .map(|&s| sideband_point(p, atoms, kappa, s, chirp.omega_m))
            .collect(),
        None => vec![(p.x_a, p.x_c)],
    };
    let weight = 1.0 / points.len() as f64;
    let mut fhat = 0.0;
    let mut nt_hat = 0.0;
    let mut nsc_dn_hat = 0.0;
    for &(x_a, x_c) in &points {
        let e_c = tr.cavity_field(x_a, x_c, cav.t1, cav.finesse());
        let nt = tr.transmission(x_a, x_c, cav.t1, cav.t2);
        fhat += weight * (n / 4.0) * 4.0 * t_tot * dec_sq_measurement(&tr, e_c, x_a, x_c);
        nt_hat += weight * nt;
        nsc_dn_hat += weight
            * nt
            * (2.0 * PI / (cav.t2 * cav.finesse()))
            * p.n_up
            * atoms.eta_down
            * absorptive(x_a + atoms.b());
    }
    let n_in = budget.n_in;
    let sigma_sq = 1.0 / (1.0 + setup.q_eff * fhat * n_in)
        + 4.0 * raman.branching * nsc_dn_hat * n_in / n;
    Ok(DetectionVariance {
        sigma_sq,
        n_detected: setup.q_eff * nt_hat * n_in,
        fisher_sql_per_photon: fhat,
        n_t_per_photon: nt_hat,
        n_sc_down_per_photon: nsc_dn_hat,
    })
}
