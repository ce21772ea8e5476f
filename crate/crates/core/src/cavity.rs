//! Steady-state optical response of a two-mirror cavity containing an
//! ensemble of two-level atoms, and the exact mapping of a cavity with
//! lossy mirrors onto a lossless cavity with external beamsplitters.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::engine::Transitions;
use crate::lorentz::{absorptive, dispersive};
use crate::spinlight::BudgetSpec;
use crate::{Error, Result};

/// Mirror and geometry parameters of the optical resonator.
///
/// `t1/t2/l1/l2` are power transmissions and losses. `finesse`, `kappa`
/// and `fsr` are redundant; when all are present the precedence is
/// `fsr + finesse -> kappa`, and [`CavityParams::consistency_warnings`]
/// reports disagreements instead of failing.
#[derive(Clone, Debug, PartialEq)]
pub struct CavityParams {
    /// Power transmission of the input mirror.
    pub t1: f64,
    /// Power transmission of the output mirror.
    pub t2: f64,
    /// Power loss of the input mirror.
    pub l1: f64,
    /// Power loss of the output mirror.
    pub l2: f64,
    /// Finesse override; derived from the mirror budget when absent.
    pub finesse: Option<f64>,
    /// Cavity FWHM linewidth (angular frequency).
    pub kappa: Option<f64>,
    /// Free spectral range (angular frequency).
    pub fsr: Option<f64>,
    /// Mode waist, 1/e^2 intensity radius (m).
    pub waist: Option<f64>,
    /// Probe wavelength (m).
    pub wavelength: Option<f64>,
}

impl CavityParams {
    /// A lossless two-mirror cavity with a known linewidth.
    pub fn lossless(t1: f64, t2: f64, kappa: f64) -> Self {
        Self {
            t1,
            t2,
            l1: 0.0,
            l2: 0.0,
            finesse: None,
            kappa: Some(kappa),
            fsr: None,
            waist: None,
            wavelength: None,
        }
    }

    /// Basic domain validation of the mirror budget.
    pub fn validate(&self) -> Result<()> {
        for (name, t, l) in [("input", self.t1, self.l1), ("output", self.t2, self.l2)] {
            if !(0.0..=1.0).contains(&t) || !(0.0..=1.0).contains(&l) || t + l > 1.0 {
                return Err(Error::InvalidInput(format!(
                    "{name} mirror budget out of range: T={t}, L={l}"
                )));
            }
        }
        Ok(())
    }

    /// Effective finesse: the explicit value if supplied, otherwise
    /// `2*pi / (T1 + L1 + T2 + L2)`.
    pub fn finesse(&self) -> f64 {
        self.finesse
            .unwrap_or(2.0 * PI / (self.t1 + self.l1 + self.t2 + self.l2))
    }

    /// Effective linewidth with precedence `fsr/finesse` over the explicit
    /// `kappa` field.
    pub fn kappa(&self) -> Result<f64> {
        if let Some(fsr) = self.fsr {
            return Ok(fsr / self.finesse());
        }
        self.kappa.ok_or_else(|| {
            Error::InvalidInput("cavity linewidth unavailable: supply kappa or fsr".into())
        })
    }

    /// Consistency warnings between the redundant finesse/kappa/fsr
    /// entries (relative disagreement above 2%) and between an explicit
    /// finesse and the mirror budget.
    pub fn consistency_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        let budget_finesse = 2.0 * PI / (self.t1 + self.l1 + self.t2 + self.l2);
        if let Some(f) = self.finesse {
            if (f - budget_finesse).abs() / budget_finesse > 0.02 {
                warnings.push(format!(
                    "finesse {f:.4e} disagrees with mirror budget 2*pi/(T1+L1+T2+L2) = {budget_finesse:.4e}"
                ));
            }
        }
        if let (Some(fsr), Some(kappa)) = (self.fsr, self.kappa) {
            let derived = fsr / self.finesse();
            if (derived - kappa).abs() / kappa > 0.02 {
                warnings.push(format!(
                    "kappa {kappa:.4e} disagrees with fsr/finesse = {derived:.4e} (fsr+finesse take precedence)"
                ));
            }
        }
        warnings
    }
}

/// Parameters of the atomic transition(s) coupled to the cavity.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomParams {
    /// Atomic FWHM linewidth (angular frequency).
    pub gamma: f64,
    /// Single-atom cooperativity of the reference transition.
    pub eta: f64,
    /// Cooperativity of the spin-up transition (four-level model).
    pub eta_up: f64,
    /// Cooperativity of the spin-down transition (four-level model).
    pub eta_down: f64,
    /// Zeeman splitting between the two transitions (angular frequency).
    pub delta_z: f64,
}

impl AtomParams {
    /// A pure three-level configuration: only the reference transition.
    pub fn three_level(gamma: f64, eta: f64) -> Self {
        Self {
            gamma,
            eta,
            eta_up: eta,
            eta_down: 0.0,
            delta_z: 0.0,
        }
    }

    /// Normalized Zeeman shift `b = 2*delta_z/gamma`.
    pub fn b(&self) -> f64 {
        2.0 * self.delta_z / self.gamma
    }
}

/// One probing condition: normalized detunings, spin-up atom number, the
/// authoritative photon-budget entry, and the probe duration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbePoint {
    /// Normalized probe-atom detuning `2*(omega_l - omega_a)/Gamma`.
    pub x_a: f64,
    /// Normalized probe-cavity detuning `2*(omega_l - omega_c)/kappa`.
    pub x_c: f64,
    /// Mean atom number in the coupled spin-up state.
    pub n_up: f64,
    /// The user-supplied photon count; the others are derived.
    pub budget: BudgetSpec,
    /// Probe duration (s), used for rate/count conversions.
    pub tau: f64,
}

impl ProbePoint {
    pub fn new(x_a: f64, x_c: f64, n_up: f64, budget: BudgetSpec, tau: f64) -> Self {
        Self {
            x_a,
            x_c,
            n_up,
            budget,
            tau,
        }
    }
}

/// Steady-state field amplitudes relative to the input field.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldResponse {
    /// Intracavity field amplitude ratio.
    pub e_c: Complex64,
    /// Transmitted field amplitude ratio.
    pub e_t: Complex64,
    /// Reflected field amplitude ratio.
    pub e_r: Complex64,
    /// Power transmission `|e_t|^2`.
    pub transmission: f64,
    /// Free-space scattered power per transmitted power.
    pub scatter_to_transmit: f64,
}

/// Amplitude coefficients of the lossless network equivalent to a cavity
/// with lossy mirrors: a lossless cavity (`t1s/r1s`, `t2s/r2s`) dressed by
/// external beamsplitters `t3s` (after the output), `t4s` (before the
/// input) and `t5s` (on the prompt-reflection path).
#[derive(Clone, Debug, PartialEq)]
pub struct LosslessEquivalent {
    pub t1s: f64,
    pub r1s: f64,
    pub t2s: f64,
    pub r2s: f64,
    pub t3s: f64,
    pub t4s: f64,
    pub t5s: f64,
}

/// Lorentzian lineshapes `(Ld, La)` at normalized detuning `x`.
pub fn lorentzians(x: f64) -> Result<(f64, f64)> {
    crate::lorentz::lorentzians(x)
}

fn three_level_transitions(atoms: &AtomParams, p: &ProbePoint) -> Transitions {
    Transitions::single(p.n_up * atoms.eta, atoms.eta)
}

/// Intracavity field amplitude ratio
/// `e_c = (finesse/pi) * i*t1 / (1 + N_up*eta*La - i(x_c + N_up*eta*Ld))`.
pub fn intracavity_field(cav: &CavityParams, atoms: &AtomParams, p: &ProbePoint) -> Complex64 {
    three_level_transitions(atoms, p).cavity_field(p.x_a, p.x_c, cav.t1, cav.finesse())
}

/// Transmitted field amplitude ratio (same denominator as the intracavity
/// field, with `-sqrt(T1*T2)` in place of `i*sqrt(T1)`).
pub fn transmitted_field(cav: &CavityParams, atoms: &AtomParams, p: &ProbePoint) -> Complex64 {
    three_level_transitions(atoms, p).transmitted_field(p.x_a, p.x_c, cav.t1, cav.t2, cav.finesse())
}

/// Power transmission `(T0, T)`: the symmetric-lossless value
/// `T0 = 1/(A^2+B^2)` and the asymmetric value `T = 4T1T2/(T1+T2)^2 * T0`.
pub fn transmission(cav: &CavityParams, atoms: &AtomParams, p: &ProbePoint) -> (f64, f64) {
    let tr = three_level_transitions(atoms, p);
    let t0 = tr.t0(p.x_a, p.x_c);
    (t0, 4.0 * cav.t1 * cav.t2 / ((cav.t1 + cav.t2) * (cav.t1 + cav.t2)) * t0)
}

/// Free-space scattering per transmitted photon,
/// `S/T = (2*pi/(T2*finesse)) * N_up*eta*La(x_a)`.
pub fn scatter_to_transmit(cav: &CavityParams, atoms: &AtomParams, p: &ProbePoint) -> Result<f64> {
    if cav.t2 <= 0.0 {
        return Err(Error::InvalidInput(
            "scatter_to_transmit: output mirror transmission T2 must be positive".into(),
        ));
    }
    Ok(2.0 * PI / (cav.t2 * cav.finesse()) * p.n_up * atoms.eta * absorptive(p.x_a))
}

/// Dressed resonances of the coupled atom-cavity system with the cavity
/// on atomic resonance.
#[derive(Clone, Debug, PartialEq)]
pub struct DressedResonances {
    /// Normalized detunings of the transmission peaks,
    /// `x_a = +-sqrt(N_up*eta*kappa/Gamma - 1)`; empty when the splitting
    /// is not resolved.
    pub roots: Vec<f64>,
    /// Vacuum Rabi frequency `2*g*sqrt(N_up)` with `g = sqrt(eta*kappa*Gamma)/2`
    /// (angular frequency).
    pub rabi: f64,
}

/// Transmission-peak positions for `omega_c = omega_a`, i.e. the real
/// roots of `x_a*Gamma/kappa + N_up*eta*Ld(x_a) = 0` away from `x_a = 0`.
pub fn dressed_resonances(
    cav: &CavityParams,
    atoms: &AtomParams,
    n_up: f64,
) -> Result<DressedResonances> {
    let kappa = cav.kappa()?;
    let g = (atoms.eta * kappa * atoms.gamma).sqrt() / 2.0;
    let split = n_up * atoms.eta * kappa / atoms.gamma - 1.0;
    let roots = if split > 0.0 {
        let x = split.sqrt();
        vec![-x, x]
    } else {
        Vec::new()
    };
    Ok(DressedResonances {
        roots,
        rabi: 2.0 * g * n_up.sqrt(),
    })
}

/// Exact mapping of a lossy two-mirror cavity onto a lossless cavity with
/// external beamsplitters. Amplitude coefficients:
/// `t1* = [1 + r1^2/t1^2]^(-1/2)`, `r2* = r1 r2 / r1*`, `t3* = t2/t2*`,
/// `t4* = t1/t1*`, `t5* = r1/(r1* t4*)`.
pub fn map_lossless(cav: &CavityParams) -> Result<LosslessEquivalent> {
    cav.validate()?;
    let r1_sq = 1.0 - cav.t1 - cav.l1;
    let r2_sq = 1.0 - cav.t2 - cav.l2;
    if cav.t1 <= 0.0 || cav.t2 <= 0.0 || r1_sq <= 0.0 || r2_sq <= 0.0 {
        return Err(Error::InvalidInput(
            "map_lossless: need 0 < T_i and R_i = 1 - T_i - L_i > 0".into(),
        ));
    }
    let (t1, r1) = (cav.t1.sqrt(), r1_sq.sqrt());
    let (t2, r2) = (cav.t2.sqrt(), r2_sq.sqrt());

    let t1s = (1.0 + r1 * r1 / (t1 * t1)).powf(-0.5);
    let r1s = (1.0 - t1s * t1s).sqrt();
    let r2s = r1 * r2 / r1s;
    if r2s > 1.0 {
        return Err(Error::InvalidInput(
            "map_lossless: mapped reflectivity r2* exceeds 1".into(),
        ));
    }
    let t2s = (1.0 - r2s * r2s).sqrt();
    let t3s = t2 / t2s;
    let t4s = t1 / t1s;
    let t5s = r1 / (r1s * t4s);
    for (name, t) in [("t3*", t3s), ("t4*", t4s), ("t5*", t5s)] {
        if t > 1.0 + 1e-12 {
            return Err(Error::InvalidInput(format!(
                "map_lossless: mapped coefficient {name} = {t} exceeds 1"
            )));
        }
    }
    Ok(LosslessEquivalent {
        t1s,
        r1s,
        t2s,
        r2s,
        t3s,
        t4s,
        t5s,
    })
}

/// Dimensionless ensemble-cavity coupling
/// `beta = N * eta_fs * (Ld + i*La)(x_a)` with the free-space
/// cooperativity `eta_fs = 6/(k^2 w^2)`.
pub fn ensemble_beta(cav: &CavityParams, atoms: &AtomParams, p: &ProbePoint) -> Result<Complex64> {
    let (w, lambda) = match (cav.waist, cav.wavelength) {
        (Some(w), Some(l)) => (w, l),
        _ => {
            return Err(Error::InvalidInput(
                "ensemble_beta: waist and wavelength are required".into(),
            ))
        }
    };
    let k = 2.0 * PI / lambda;
    let eta_fs = 6.0 / (k * k * w * w);
    let _ = atoms;
    Ok(p.n_up * eta_fs * Complex64::new(dispersive(p.x_a), absorptive(p.x_a)))
}

fn two_mirror_fields(
    t1: f64,
    r1: f64,
    t2: f64,
    r2: f64,
    beta: Complex64,
    kl: f64,
) -> (Complex64, Complex64, Complex64) {
    let i = Complex64::new(0.0, 1.0);
    let round_trip = r1 * r2 * (2.0 * i * kl).exp();
    let denom = Complex64::new(1.0, 0.0) - 4.0 * i * beta - round_trip;
    let e_c = i * t1 / denom;
    let e_t = -(t1 * t2) * (i * kl).exp() / denom;
    let e_r = Complex64::new(r1, 0.0) - t1 * t1 * r2 * (2.0 * i * kl).exp() / denom;
    (e_c, e_t, e_r)
}

fn field_response(e_c: Complex64, e_t: Complex64, e_r: Complex64, beta: Complex64) -> FieldResponse {
    let transmission = e_t.norm_sqr();
    // Round-trip power lost to the ensemble: |1 - 4i*beta|^2 - 1
    // = 8*Im(beta) + 16*|beta|^2, which balances the energy budget of
    // lossless mirrors exactly.
    let scattered = e_c.norm_sqr() * (8.0 * beta.im + 16.0 * beta.norm_sqr());
    FieldResponse {
        e_c,
        e_t,
        e_r,
        transmission,
        scatter_to_transmit: if transmission > 0.0 {
            scattered / transmission
        } else {
            0.0
        },
    }
}

/// Exact steady-state fields of the (possibly lossy) two-mirror cavity at
/// round-trip phase `2*k*L`, without the near-resonance approximation.
pub fn lossy_fields(
    cav: &CavityParams,
    atoms: &AtomParams,
    p: &ProbePoint,
    kl: f64,
) -> Result<FieldResponse> {
    cav.validate()?;
    let beta = ensemble_beta(cav, atoms, p)?;
    let r1 = (1.0 - cav.t1 - cav.l1).sqrt();
    let r2 = (1.0 - cav.t2 - cav.l2).sqrt();
    let (e_c, e_t, e_r) = two_mirror_fields(cav.t1.sqrt(), r1, cav.t2.sqrt(), r2, beta, kl);
    Ok(field_response(e_c, e_t, e_r, beta))
}

/// Steady-state fields of a mapped lossless network: input attenuated by
/// `t4*`, output attenuated by `t3*`, prompt reflection routed through
/// `t5*`, and the cavity leak exiting through the combined `t4*/t5*` path.
pub fn mapped_fields(map: &LosslessEquivalent, beta: Complex64, kl: f64) -> FieldResponse {
    let i = Complex64::new(0.0, 1.0);
    let round_trip = map.r1s * map.r2s * (2.0 * i * kl).exp();
    let denom = Complex64::new(1.0, 0.0) - 4.0 * i * beta - round_trip;
    let e_c = map.t4s * i * map.t1s / denom;
    let e_t = map.t4s * map.t3s * (-(map.t1s * map.t2s)) * (i * kl).exp() / denom;
    // Prompt reflection r1 = t5*t4*r1*; the cavity leak t1^2*r2 maps to
    // (t4*/t5*) t1*^2 r2* since r2 = r2*/(t5*t4*).
    let e_r = Complex64::new(map.t5s * map.t4s * map.r1s, 0.0)
        - (map.t4s / map.t5s) * map.t1s * map.t1s * map.r2s * (2.0 * i * kl).exp() / denom;
    field_response(e_c, e_t, e_r, beta)
}

/// Warn when the intracavity photon number approaches the linear-response
/// bound (`n_c` of order the coupled atom number).
pub fn saturation_warning(n_c: f64, n_up: f64) -> Option<String> {
    if n_c >= 0.1 * n_up && n_up > 0.0 {
        Some(format!(
            "intracavity photon number {n_c:.3e} is within 10x of the coupled atom number {n_up:.3e}; linear atomic response may not hold"
        ))
    } else {
        None
    }
}
