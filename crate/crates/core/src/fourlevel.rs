//! Four-level extension: modified cavity response with the second,
//! Zeeman-shifted transition, per-photon shearing/information/phase
//! quantities, Raman spin-flip noise, the compensation detuning, and the
//! two-color pulse solver and optimizer.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cavity::{AtomParams, CavityParams};
use crate::engine::Transitions;
use crate::lorentz::{absorptive, dispersive};
use crate::spinlight::PhotonBudget;
use crate::{Error, Result};

/// One four-level probing condition. `x_a` is normalized to the
/// `|up> <-> |e_up>` transition; the second transition sits at `x_a + b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourLevelPoint {
    pub x_a: f64,
    pub x_c: f64,
    /// Normalized Zeeman shift `2*delta_z/Gamma`.
    pub b: f64,
    pub n_up: f64,
    pub n_down: f64,
    pub eta_up: f64,
    pub eta_down: f64,
}

impl FourLevelPoint {
    /// Equator configuration (`N_up = N_down = N/2`) from the atomic
    /// parameters.
    pub fn equator(atoms: &AtomParams, n_total: f64, x_a: f64, x_c: f64) -> Self {
        Self {
            x_a,
            x_c,
            b: atoms.b(),
            n_up: n_total / 2.0,
            n_down: n_total / 2.0,
            eta_up: atoms.eta_up,
            eta_down: atoms.eta_down,
        }
    }

    fn transitions(&self) -> Transitions {
        Transitions::pair(
            self.n_up * self.eta_up,
            self.eta_up,
            self.n_down * self.eta_down,
            self.eta_down,
            self.b,
        )
    }

    fn n_total(&self) -> f64 {
        self.n_up + self.n_down
    }
}

/// Raman spin-flip noise model. When `rate_down_up` is absent the flip
/// rate is derived from the intracavity scattering on the down
/// transition times the branching ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RamanModel {
    /// Explicit flip rate `R_down_up` (per unit time), overriding the
    /// derived one.
    pub rate_down_up: Option<f64>,
    /// Branching ratio of `|e_down> -> |up>` decay, in [0, 1].
    pub branching: f64,
}

impl RamanModel {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.branching) {
            return Err(Error::InvalidInput(format!(
                "raman model: branching ratio must be in [0, 1], got {}",
                self.branching
            )));
        }
        Ok(())
    }
}

/// Per-input-photon quantities of one probe color.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerPhoton {
    pub n_t: f64,
    pub n_sc_up: f64,
    pub n_sc_down: f64,
    pub q: f64,
    pub f: f64,
    pub delta_phi: f64,
}

/// Solved two-color pulse pair: per-photon quantities of each color and
/// the power ratio that cancels the atom-number dependence of both the
/// shearing and the phase shift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoColorPulse {
    /// Blue-pulse probe detuning from atomic resonance (angular).
    pub omega_l1: f64,
    /// Red-pulse probe detuning from atomic resonance (angular).
    pub omega_l2: f64,
    /// Power ratio gamma of red to blue pulse.
    pub gamma_ratio: f64,
    /// Per-photon shearing of each color.
    pub q_hat: [f64; 2],
    /// Per-photon normalized QFI of each color.
    pub f_hat: [f64; 2],
    /// Per-photon phase shift of each color.
    pub dphi_hat: [f64; 2],
}

impl TwoColorPulse {
    /// Combined per-photon ratio `(Q1 + gamma*Q2)/(F1 + gamma*F2)`.
    pub fn combined_q_over_f(&self) -> f64 {
        (self.q_hat[0] + self.gamma_ratio * self.q_hat[1])
            / (self.f_hat[0] + self.gamma_ratio * self.f_hat[1])
    }
}

/// Intracavity field amplitude ratio with both transitions contributing.
pub fn fl_cavity_field(cav: &CavityParams, flp: &FourLevelPoint) -> Complex64 {
    flp.transitions()
        .cavity_field(flp.x_a, flp.x_c, cav.t1, cav.finesse())
}

/// Power transmission `(T0, T)` with both transitions contributing.
pub fn fl_transmission(cav: &CavityParams, flp: &FourLevelPoint) -> (f64, f64) {
    let tr = flp.transitions();
    let t0 = tr.t0(flp.x_a, flp.x_c);
    (
        t0,
        4.0 * cav.t1 * cav.t2 / ((cav.t1 + cav.t2) * (cav.t1 + cav.t2)) * t0,
    )
}

/// Per-input-photon transmitted/scattered counts, shearing `Q`,
/// normalized QFI `F` and phase shift of one probe color. Uses the
/// squeezing-side convention `dN_up/dSz = +1`, `dN_down/dSz = -1`.
pub fn per_photon(cav: &CavityParams, flp: &FourLevelPoint) -> PerPhoton {
    let tr = flp.transitions();
    let fin = cav.finesse();
    let (x_a, x_c) = (flp.x_a, flp.x_c);
    let t0 = tr.t0(x_a, x_c);
    let n_t = tr.transmission(x_a, x_c, cav.t1, cav.t2);
    let (a, b) = tr.denominator(x_a, x_c);
    let (da, db) = tr.d_denominator(x_a, &[1.0, -1.0]);
    let sc = tr.scatter_per_transmit(x_a, cav.t2, fin);
    let omg = flp.eta_up * dispersive(x_a) - flp.eta_down * dispersive(x_a + flp.b);
    let delta_phi = PI / (fin * cav.t2) * omg * n_t;
    let n = flp.n_total();
    let q = -n * (PI / (fin * cav.t2)) * omg * n_t * t0 * (2.0 * a * da + 2.0 * b * db);
    let s = n / 2.0;
    let scat = PI / fin
        * (flp.n_up * flp.eta_up * absorptive(x_a)
            + flp.n_down * flp.eta_down * absorptive(x_a + flp.b));
    let e_c = tr.cavity_field(x_a, x_c, cav.t1, fin);
    let dec_sq = e_c.norm_sqr() * (da * da + db * db) * t0;
    let f = (s / 2.0) * 4.0 * (cav.t1 + cav.t2 + scat) * dec_sq;
    PerPhoton {
        n_t: n_t * 1.0,
        n_sc_up: n_t * sc[0],
        n_sc_down: n_t * sc[1],
        q,
        f,
        delta_phi,
    }
}

/// One-pulse coherent and information quantities, scaled to `n_in` input
/// photons: `(delta_phi, Q, F)`.
pub fn fl_squeeze(cav: &CavityParams, flp: &FourLevelPoint, n_in: f64) -> (f64, f64, f64) {
    let pp = per_photon(cav, flp);
    (pp.delta_phi * n_in, pp.q * n_in, pp.f * n_in)
}

/// Raman-induced `Sz` variance in SQL units,
/// `4 * R_down_up * tau / N` with the derived rate
/// `R_down_up * tau = branching * n_sc_down`.
pub fn raman_variance(
    cav: &CavityParams,
    flp: &FourLevelPoint,
    budget: &PhotonBudget,
    model: &RamanModel,
    tau: f64,
) -> Result<f64> {
    model.validate()?;
    let n = flp.n_total();
    let r_tau = match model.rate_down_up {
        Some(rate) => rate * tau,
        None => {
            let n_sc_down = budget.n_t
                * (2.0 * PI / (cav.t2 * cav.finesse()))
                * flp.n_down
                * flp.eta_down
                * absorptive(flp.x_a + flp.b);
            model.branching * n_sc_down
        }
    };
    Ok(4.0 * r_tau / n)
}

/// Compensation detuning restoring a symmetric lineshape about the bare
/// atomic resonance: `delta_c = N_down*eta_down*Gamma*kappa/(4*delta_z)`;
/// the cavity is placed at `omega_c = omega_a - delta_c`.
pub fn compensation_detuning(
    cav: &CavityParams,
    atoms: &AtomParams,
    n_down: f64,
) -> Result<f64> {
    if atoms.delta_z == 0.0 {
        return Err(Error::InvalidInput(
            "compensation_detuning: Zeeman splitting delta_z must be nonzero".into(),
        ));
    }
    Ok(n_down * atoms.eta_down * atoms.gamma * cav.kappa()? / (4.0 * atoms.delta_z))
}

/// Per-photon quantities for a probe at angular detuning `omega` from the
/// atomic resonance, with the cavity at `omega_c = omega_a - delta_cav`.
fn per_photon_at(
    cav: &CavityParams,
    atoms: &AtomParams,
    omega: f64,
    n_total: f64,
    delta_cav: f64,
    kappa: f64,
) -> PerPhoton {
    let flp = FourLevelPoint::equator(
        atoms,
        n_total,
        2.0 * omega / atoms.gamma,
        2.0 * (omega + delta_cav) / kappa,
    );
    per_photon(cav, &flp)
}

/// Central-difference derivatives `(dQhat/dN, d(dphi_hat)/dN)` at the
/// operating atom number, relative step 1e-3.
fn d_by_n(
    cav: &CavityParams,
    atoms: &AtomParams,
    omega: f64,
    n_total: f64,
    delta_cav: f64,
    kappa: f64,
) -> (f64, f64) {
    let h = 1e-3;
    let p = per_photon_at(cav, atoms, omega, n_total * (1.0 + h), delta_cav, kappa);
    let m = per_photon_at(cav, atoms, omega, n_total * (1.0 - h), delta_cav, kappa);
    (
        (p.q - m.q) / (2.0 * n_total * h),
        (p.delta_phi - m.delta_phi) / (2.0 * n_total * h),
    )
}

/// Finds the red-pulse detuning and power ratio solving the two
/// compensation conditions `dQ1/dN + gamma*dQ2/dN = 0` and
/// `ddphi1/dN - gamma*ddphi2/dN = 0` for a given blue pulse `omega_l1`.
/// The opposite sign in the phase condition reflects the echo between
/// the two pulses, which reverses the accumulated phase of the second
/// color while the shearing contributions add.
///
/// `window` restricts the `omega_l2` search (angular frequency, relative
/// to atomic resonance); the default covers the region just above the
/// lower dressed resonance, excluding the immediate vicinity of the
/// atomic resonance.
pub fn two_color_solve(
    cav: &CavityParams,
    atoms: &AtomParams,
    n_total: f64,
    omega_l1: f64,
    window: Option<(f64, f64)>,
) -> Result<TwoColorPulse> {
    let kappa = cav.kappa()?;
    let delta_cav = if atoms.eta_down > 0.0 {
        compensation_detuning(cav, atoms, n_total / 2.0)?
    } else {
        0.0
    };
    let g = (atoms.eta_up * kappa * atoms.gamma).sqrt() / 2.0;
    let rabi = g * (n_total / 2.0).sqrt();
    let (lo, hi) = window.unwrap_or((-rabi + 0.8152 * atoms.gamma, -1.087 * atoms.gamma));
    if !(hi > lo) {
        return Err(Error::InvalidInput(format!(
            "two_color_solve: empty omega_l2 window ({lo}, {hi})"
        )));
    }
    if omega_l1 >= lo && omega_l1 <= hi {
        return Err(Error::InvalidInput(
            "two_color_solve: omega_l1 lies inside the omega_l2 search window".into(),
        ));
    }
    let (dq1, dp1) = d_by_n(cav, atoms, omega_l1, n_total, delta_cav, kappa);
    let residual = |omega2: f64| {
        let (dq2, dp2) = d_by_n(cav, atoms, omega2, n_total, delta_cav, kappa);
        (dq1 * dp2 + dp1 * dq2, dq2, dp2)
    };
    // Grid pre-scan at ~2 kHz resolution (Gamma/92 at the Yb-171 value).
    let step = atoms.gamma / 92.0;
    let n_pts = (((hi - lo) / step).ceil() as usize).max(8);
    let mut prev: Option<(f64, f64)> = None;
    let mut roots: Vec<TwoColorPulse> = Vec::new();
    for i in 0..=n_pts {
        let w = lo + (hi - lo) * i as f64 / n_pts as f64;
        let (r, _, _) = residual(w);
        if let Some((wp, rp)) = prev {
            if rp == 0.0 || rp * r < 0.0 {
                // Bisection on the bracketed sign change.
                let (mut a, mut b, ra) = (wp, w, rp);
                for _ in 0..60 {
                    let mid = 0.5 * (a + b);
                    let (rm, _, _) = residual(mid);
                    if rm.signum() == ra.signum() {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                let omega_l2 = 0.5 * (a + b);
                let (_, dq2, dp2) = residual(omega_l2);
                let gamma_ratio = -dq1 / dq2;
                if gamma_ratio > 0.0 {
                    let rq = (dq1 + gamma_ratio * dq2).abs();
                    let rp_res = (dp1 - gamma_ratio * dp2).abs();
                    if rq <= 1e-8 * dq1.abs().max(1e-300)
                        && rp_res <= 1e-6 * dp1.abs().max(1e-300)
                    {
                        let p1 = per_photon_at(cav, atoms, omega_l1, n_total, delta_cav, kappa);
                        let p2 = per_photon_at(cav, atoms, omega_l2, n_total, delta_cav, kappa);
                        roots.push(TwoColorPulse {
                            omega_l1,
                            omega_l2,
                            gamma_ratio,
                            q_hat: [p1.q, p2.q],
                            f_hat: [p1.f, p2.f],
                            dphi_hat: [p1.delta_phi, p2.delta_phi],
                        });
                    }
                }
            }
        }
        prev = Some((w, r));
    }
    roots
        .into_iter()
        .max_by(|a, b| {
            a.combined_q_over_f()
                .abs()
                .total_cmp(&b.combined_q_over_f().abs())
        })
        .ok_or_else(|| {
            Error::NoSolution(format!(
                "two_color_solve: no compensating (omega_l2, gamma>0) in window \
                 ({lo:.4e}, {hi:.4e}); dQ1/dN = {dq1:.4e}, ddphi1/dN = {dp1:.4e}"
            ))
        })
}

/// Maximizes the combined per-photon `|Q/F|` over a grid of blue-pulse
/// detunings, subject to two-color feasibility.
pub fn two_color_optimize(
    cav: &CavityParams,
    atoms: &AtomParams,
    n_total: f64,
    window_l1: (f64, f64),
    points: usize,
) -> Result<(f64, TwoColorPulse, f64)> {
    if points < 2 || !(window_l1.1 > window_l1.0) {
        return Err(Error::InvalidInput(
            "two_color_optimize: need a nonempty omega_l1 window with >= 2 points".into(),
        ));
    }
    let mut best: Option<(f64, TwoColorPulse, f64)> = None;
    for i in 0..points {
        let w1 = window_l1.0 + (window_l1.1 - window_l1.0) * i as f64 / (points - 1) as f64;
        if let Ok(pulse) = two_color_solve(cav, atoms, n_total, w1, None) {
            let value = pulse.combined_q_over_f().abs();
            if best.as_ref().map_or(true, |(_, _, v)| value > *v) {
                best = Some((w1, pulse, value));
            }
        }
    }
    best.ok_or_else(|| {
        Error::NoSolution("two_color_optimize: no feasible omega_l1 in the window".into())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::{intracavity_field, ProbePoint};
    use crate::spinlight::BudgetSpec;

    const KAPPA: f64 = 0.52;
    const GAMMA: f64 = 0.184;

    fn cav() -> CavityParams {
        CavityParams::lossless(30e-6, 453.3e-6, KAPPA)
    }

    fn yb() -> AtomParams {
        AtomParams {
            gamma: GAMMA,
            eta: 1.8,
            eta_up: 1.8,
            eta_down: 0.6,
            delta_z: 230.0 * GAMMA / 2.0,
        }
    }

    #[test]
    fn three_level_reduction() {
        let cav = cav();
        let mut atoms = yb();
        atoms.eta_down = 0.0;
        for i in 0..100 {
            let x_a = -80.0 + 160.0 * i as f64 / 99.0;
            let x_c = 0.3 * x_a;
            let flp = FourLevelPoint::equator(&atoms, 1000.0, x_a, x_c);
            let e4 = fl_cavity_field(&cav, &flp);
            let p = ProbePoint::new(x_a, x_c, 500.0, BudgetSpec::NIn(1.0), 100.0);
            let e3 = intracavity_field(&cav, &atoms, &p);
            assert!((e4 - e3).norm() <= 1e-12 * e3.norm());
        }
    }

    #[test]
    fn far_detuned_second_transition_vanishes() {
        let cav = cav();
        let mut atoms = yb();
        atoms.delta_z = 1e9 * GAMMA / 2.0;
        let flp = FourLevelPoint::equator(&atoms, 1000.0, 30.0, 10.0);
        let e4 = fl_cavity_field(&cav, &flp);
        let p = ProbePoint::new(30.0, 10.0, 500.0, BudgetSpec::NIn(1.0), 100.0);
        let mut three = atoms.clone();
        three.eta_down = 0.0;
        let e3 = intracavity_field(&cav, &three, &p);
        // The far-detuned transition leaves a dispersive tail ~ N*eta/b
        // (~1e-7 here), so only demand agreement at that scale.
        assert!((e4 - e3).norm() < 1e-6 * e3.norm());
    }

    #[test]
    fn reduction_matches_three_level_q_f() {
        let cav = cav();
        let mut atoms = yb();
        atoms.eta_down = 0.0;
        let x_a = 30.0;
        let x_c = x_a * GAMMA / KAPPA;
        let flp = FourLevelPoint::equator(&atoms, 1000.0, x_a, x_c);
        let pp = per_photon(&cav, &flp);
        let p = ProbePoint::new(x_a, x_c, 500.0, BudgetSpec::NIn(1.0), 100.0);
        let b = crate::spinlight::photon_budget(&cav, &atoms, &p).unwrap();
        let q3 = crate::spinlight::shearing(&cav, &atoms, &p, &b).unwrap().q;
        let f3 = crate::qfi::total_f(&cav, &atoms, &p, &b);
        let dphi3 = crate::spinlight::phase_shift(&cav, &atoms, &p, &b).unwrap();
        assert!((pp.q - q3).abs() <= 1e-9 * q3.abs());
        assert!((pp.f - f3).abs() <= 1e-9 * f3.abs());
        assert!((pp.delta_phi - dphi3).abs() <= 1e-9 * dphi3.abs());
    }

    #[test]
    fn q_roots_at_dispersive_zeros() {
        let cav = cav();
        let atoms = yb();
        // omg = eta_up*Ld(x_a) - eta_down*Ld(x_a+b) vanishes at x_a=0 and
        // x_a=-b only in the symmetric eta case; with eta_down=eta_up/3
        // the roots shift slightly but Q still crosses zero near both.
        for root in [0.0, -atoms.b()] {
            let q_at = |x: f64| {
                let flp = FourLevelPoint::equator(&atoms, 1000.0, x, 0.0);
                per_photon(&cav, &flp).q
            };
            assert!(q_at(root - 0.5) * q_at(root + 0.5) < 0.0);
        }
    }

    #[test]
    fn compensation_detuning_values() {
        let delta_c = compensation_detuning(&cav(), &yb(), 500.0).unwrap();
        assert!((delta_c - 0.34).abs() / 0.34 < 0.05, "delta_c = {delta_c}");
        let shift = 2.0 * delta_c / KAPPA;
        assert!((shift - 1.3).abs() / 1.3 < 0.05, "shift = {shift}");
        // N_down = 0 -> 0; delta_z = 0 -> error.
        assert_eq!(compensation_detuning(&cav(), &yb(), 0.0).unwrap(), 0.0);
        let mut flat = yb();
        flat.delta_z = 0.0;
        assert!(compensation_detuning(&cav(), &flat, 500.0).is_err());
    }

    #[test]
    fn compensated_lineshape_symmetric() {
        let cav = cav();
        let atoms = yb();
        let delta_c = compensation_detuning(&cav, &atoms, 500.0).unwrap();
        let g = (atoms.eta_up * KAPPA * GAMMA).sqrt() / 2.0;
        // The compensation holds away from the dressed resonances at
        // +/- g*sqrt(N/2); scan up to 75% of that splitting, where the
        // residual asymmetry stays below 2%.
        let w_max = 0.75 * g * (500.0f64).sqrt();
        let mut i = 0;
        while i <= 100 {
            let omega = w_max * i as f64 / 100.0 + 0.05;
            // Skip the down-transition resonance region.
            if (2.0 * omega / GAMMA + atoms.b()).abs() > 20.0 {
                let t_at = |w: f64| {
                    let flp = FourLevelPoint::equator(
                        &atoms,
                        1000.0,
                        2.0 * w / GAMMA,
                        2.0 * (w + delta_c) / KAPPA,
                    );
                    fl_transmission(&cav, &flp).1
                };
                let (tp, tm) = (t_at(omega), t_at(-omega));
                assert!(
                    (tp - tm).abs() / tp <= 0.02,
                    "asymmetry {} at omega={omega}",
                    (tp - tm).abs() / tp
                );
            }
            i += 1;
        }
    }

    #[test]
    fn per_photon_frozen_values() {
        let cav = cav();
        let atoms = yb();
        let delta_c = compensation_detuning(&cav, &atoms, 500.0).unwrap();
        let kappa = KAPPA;
        let p1 = per_photon_at(&cav, &atoms, 7.333, 1000.0, delta_c, kappa);
        assert!((p1.q - (-2.0413e-5)).abs() / 2.0413e-5 < 1e-3, "Q1 = {}", p1.q);
        assert!((p1.f - 1.2704e-6).abs() / 1.2704e-6 < 1e-3, "F1 = {}", p1.f);
        let p2 = per_photon_at(&cav, &atoms, -2.0, 1000.0, delta_c, kappa);
        assert!((p2.q - (-4.7817e-5)).abs() / 4.7817e-5 < 1e-3, "Q2 = {}", p2.q);
        assert!((p2.f - 2.7847e-6).abs() / 2.7847e-6 < 1e-3, "F2 = {}", p2.f);
        let (dq1, _) = d_by_n(&cav, &atoms, 7.333, 1000.0, delta_c, kappa);
        assert!((dq1 - (-6.3616e-8)).abs() / 6.3616e-8 < 1e-3, "dQ1 = {dq1}");
    }

    #[test]
    fn gamma_q_curve_matches_quoted_point() {
        // The Q-compensation curve passes through gamma = 0.52 at
        // omega_2 = -2.0 (2*pi*MHz units).
        let cav = cav();
        let atoms = yb();
        let delta_c = compensation_detuning(&cav, &atoms, 500.0).unwrap();
        let (dq1, _) = d_by_n(&cav, &atoms, 7.333, 1000.0, delta_c, KAPPA);
        let (dq2, _) = d_by_n(&cav, &atoms, -2.0, 1000.0, delta_c, KAPPA);
        let gamma_q = -dq1 / dq2;
        assert!((gamma_q - 0.52).abs() < 1e-3, "gamma_Q(-2.0) = {gamma_q}");
    }

    #[test]
    fn two_color_solution() {
        let cav = cav();
        let atoms = yb();
        let pulse = two_color_solve(&cav, &atoms, 1000.0, 7.333, None).unwrap();
        assert!(
            (pulse.omega_l2 - (-1.8600)).abs() < 5e-3,
            "omega_l2 = {}",
            pulse.omega_l2
        );
        assert!(
            (pulse.gamma_ratio - 0.6409).abs() < 5e-3,
            "gamma = {}",
            pulse.gamma_ratio
        );
    }

    #[test]
    fn two_color_root_satisfies_both_conditions() {
        let cav = cav();
        let atoms = yb();
        let pulse = two_color_solve(&cav, &atoms, 1000.0, 7.333, None).unwrap();
        let delta_c = compensation_detuning(&cav, &atoms, 500.0).unwrap();
        let (dq1, dp1) = d_by_n(&cav, &atoms, pulse.omega_l1, 1000.0, delta_c, KAPPA);
        let (dq2, dp2) = d_by_n(&cav, &atoms, pulse.omega_l2, 1000.0, delta_c, KAPPA);
        let gamma = pulse.gamma_ratio;
        assert!(gamma > 0.0);
        assert!((dq1 + gamma * dq2).abs() <= 1e-8 * dq1.abs());
        assert!((dp1 - gamma * dp2).abs() <= 1e-6 * dp1.abs());
        // Combined shearing-to-measurement ratio at the root.
        let ratio = pulse.combined_q_over_f();
        assert!((ratio.abs() - 16.94).abs() / 16.94 < 0.01, "ratio = {ratio}");
    }

    #[test]
    fn two_color_errors() {
        let cav = cav();
        let atoms = yb();
        // omega_l1 inside the search window.
        assert!(two_color_solve(&cav, &atoms, 1000.0, -2.0, None).is_err());
        // Window with no root.
        assert!(matches!(
            two_color_solve(&cav, &atoms, 1000.0, 7.333, Some((-0.4, -0.3))),
            Err(Error::NoSolution(_))
        ));
        // Degenerate/empty windows.
        assert!(two_color_solve(&cav, &atoms, 1000.0, 7.333, Some((1.0, 1.0))).is_err());
        assert!(two_color_optimize(&cav, &atoms, 1000.0, (7.0, 8.0), 1).is_err());
    }

    #[test]
    fn raman_variance_cases() {
        let cav = cav();
        let atoms = yb();
        let flp = FourLevelPoint::equator(&atoms, 1000.0, -10.0, 0.0);
        let budget = PhotonBudget {
            n_in: 1.0,
            n_t: 0.02,
            n_sc: 0.0,
            n_c: 0.0,
        };
        let model = RamanModel {
            rate_down_up: None,
            branching: 2.0 / 3.0,
        };
        let v = raman_variance(&cav, &flp, &budget, &model, 100.0).unwrap();
        assert!(v > 0.0);
        // branching = 0 -> 0.
        let zero = RamanModel { branching: 0.0, ..model };
        assert_eq!(raman_variance(&cav, &flp, &budget, &zero, 100.0).unwrap(), 0.0);
        // N_down = 0 -> 0.
        let empty = FourLevelPoint { n_down: 0.0, ..flp };
        assert_eq!(raman_variance(&cav, &empty, &budget, &model, 100.0).unwrap(), 0.0);
        // Linear in probe power.
        let double = PhotonBudget { n_t: 0.04, ..budget };
        let v2 = raman_variance(&cav, &flp, &double, &model, 100.0).unwrap();
        assert!((v2 - 2.0 * v).abs() < 1e-15);
        // Invalid branching rejected.
        let bad = RamanModel { branching: 1.5, ..model };
        assert!(raman_variance(&cav, &flp, &budget, &bad, 100.0).is_err());
    }
}
