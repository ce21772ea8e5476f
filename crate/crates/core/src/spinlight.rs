//! Effective light-induced spin Hamiltonian quantities for the
//! three-level model: photon-budget conversions, collective phase shift,
//! shearing strength, and the shearing-to-information ratio.

use std::f64::consts::PI;

use crate::cavity::{scatter_to_transmit, transmission, AtomParams, CavityParams, ProbePoint};
use crate::lorentz::dispersive;
use crate::{Error, Result};

/// Which photon count the user supplied; the others are derived from it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BudgetSpec {
    /// Mean photon number incident on the cavity.
    NIn(f64),
    /// Mean transmitted photon number.
    NT(f64),
    /// Mean photon number scattered into free space.
    NSc(f64),
    /// Mean intracavity photon number.
    NC(f64),
}

impl BudgetSpec {
    pub fn value(&self) -> f64 {
        match *self {
            BudgetSpec::NIn(v) | BudgetSpec::NT(v) | BudgetSpec::NSc(v) | BudgetSpec::NC(v) => v,
        }
    }
}

/// Consistent set of mean photon numbers for one probe pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotonBudget {
    /// Photons incident on the cavity.
    pub n_in: f64,
    /// Transmitted photons, `n_t = T * n_in`.
    pub n_t: f64,
    /// Free-space scattered photons, `n_sc = (S/T) * n_t`.
    pub n_sc: f64,
    /// Intracavity photons integrated as a count, `n_c = n_t/(T2*kappa*tau)`.
    pub n_c: f64,
}

/// Coherent (first-order) effects of the probe on the collective spin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentEffects {
    /// Accumulated collective phase (rad).
    pub delta_phi: f64,
    /// Shearing rate `chi = Q/(N*tau)` (rad/s per unit Sz).
    pub chi_rate: f64,
    /// Dimensionless shearing strength `Q = N*chi*tau`.
    pub q: f64,
    /// Light shift per intracavity photon (angular frequency).
    pub light_shift_per_photon: f64,
}

/// Fills the remaining photon counts from the single authoritative one,
/// using the power transmission, the scattering-to-transmission ratio and
/// `n_c = n_t / (T2 * kappa * tau)`.
pub fn photon_budget(
    cav: &CavityParams,
    atoms: &AtomParams,
    p: &ProbePoint,
) -> Result<PhotonBudget> {
    let supplied = p.budget.value();
    if !(supplied.is_finite() && supplied >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "photon_budget: authoritative photon count must be finite and >= 0, got {supplied}"
        )));
    }
    let (_, t) = transmission(cav, atoms, p);
    let st = scatter_to_transmit(cav, atoms, p)?;
    let kappa = cav.kappa()?;
    if p.tau <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "photon_budget: probe duration must be positive, got {}",
            p.tau
        )));
    }
    let cavity_per_t = 1.0 / (cav.t2 * kappa * p.tau);
    let n_t = match p.budget {
        BudgetSpec::NIn(n_in) => t * n_in,
        BudgetSpec::NT(n_t) => n_t,
        BudgetSpec::NSc(n_sc) => {
            if st == 0.0 {
                if n_sc > 0.0 {
                    return Err(Error::Inconsistent(
                        "photon_budget: nonzero scattered photon count requested but the \
                         configuration cannot scatter (N_up*eta*La(x_a) = 0)"
                            .into(),
                    ));
                }
                0.0
            } else {
                n_sc / st
            }
        }
        BudgetSpec::NC(n_c) => n_c / cavity_per_t,
    };
    Ok(PhotonBudget {
        n_in: if t > 0.0 { n_t / t } else { 0.0 },
        n_t,
        n_sc: st * n_t,
        n_c: cavity_per_t * n_t,
    })
}

/// Light shift per intracavity photon, `Omega = pi*eta*Ld(x_a)*kappa/finesse`.
pub fn light_shift_per_photon(cav: &CavityParams, atoms: &AtomParams, p: &ProbePoint) -> Result<f64> {
    Ok(PI * atoms.eta * dispersive(p.x_a) * cav.kappa()? / cav.finesse())
}

/// Collective phase accumulated over the pulse,
/// `delta_phi = -(n_sc/(2*N_up))*x_a`.
pub fn phase_shift(
    _cav: &CavityParams,
    _atoms: &AtomParams,
    p: &ProbePoint,
    budget: &PhotonBudget,
) -> Result<f64> {
    if p.n_up <= 0.0 {
        if budget.n_sc > 0.0 {
            return Err(Error::Inconsistent(
                "phase_shift: scattered photons with no coupled atoms".into(),
            ));
        }
        return Ok(0.0);
    }
    Ok(-(budget.n_sc / (2.0 * p.n_up)) * p.x_a)
}

/// Alternative route to the phase shift through the transmitted photon
/// number, `delta_phi = eta*n_t*(T1+T2)/(2*T2)*Ld(x_a)`; agrees with
/// [`phase_shift`] identically.
pub fn phase_shift_via_transmission(
    cav: &CavityParams,
    atoms: &AtomParams,
    p: &ProbePoint,
    budget: &PhotonBudget,
) -> f64 {
    atoms.eta * budget.n_t * (cav.t1 + cav.t2) / (2.0 * cav.t2) * dispersive(p.x_a)
}

/// Shearing strength and rate at the equator,
/// `Q = -2*eta*Ld(x_a)*(1 - x_c*x_a + S*eta)*T0*n_sc`, `chi = Q/(N*tau)`
/// with `N = 2*N_up` (equator convention `N_up = S`).
pub fn shearing(
    cav: &CavityParams,
    atoms: &AtomParams,
    p: &ProbePoint,
    budget: &PhotonBudget,
) -> Result<CoherentEffects> {
    let s_eta = p.n_up * atoms.eta;
    let t0 = {
        use crate::engine::Transitions;
        Transitions::single(s_eta, atoms.eta).t0(p.x_a, p.x_c)
    };
    let q = -2.0 * atoms.eta * dispersive(p.x_a) * (1.0 - p.x_c * p.x_a + s_eta) * t0 * budget.n_sc;
    let n = 2.0 * p.n_up;
    let chi_rate = if n > 0.0 && p.tau > 0.0 {
        q / (n * p.tau)
    } else {
        0.0
    };
    Ok(CoherentEffects {
        delta_phi: phase_shift(cav, atoms, p, budget)?,
        chi_rate,
        q,
        light_shift_per_photon: light_shift_per_photon(cav, atoms, p)?,
    })
}

/// Closed-form ratio of shearing to normalized QFI,
/// `Q/F = x_a*(1 - x_c*x_a + S*eta)/(1 + x_a^2 + S*eta/2)`.
pub fn q_over_f(atoms: &AtomParams, p: &ProbePoint, n_up: f64) -> f64 {
    let s_eta = n_up * atoms.eta;
    p.x_a * (1.0 - p.x_c * p.x_a + s_eta) / (1.0 + p.x_a * p.x_a + s_eta / 2.0)
}
