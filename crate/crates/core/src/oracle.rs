//! Exact, independent brute-force validators: Dicke-basis coherent spin
//! states and one-axis-twisting expectation values, variance-vs-angle
//! scans, fidelity-based QFI, Poisson-counting Fisher information, and
//! the adiabatic-elimination effective detuning.
//!
//! Nothing here calls the modules it validates.

use num_complex::Complex64;

use crate::{Error, Result};

/// Symmetric collective-spin state expanded over Dicke states
/// `|S, S_z>` with `S = N/2`; `amplitudes[k]` multiplies `S_z = k - S`.
#[derive(Clone, Debug, PartialEq)]
pub struct DickeState {
    pub n_atoms: usize,
    pub amplitudes: Vec<Complex64>,
}

/// Natural-log factorial table up to `n`.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n + 1];
    for k in 1..=n {
        t[k] = t[k - 1] + (k as f64).ln();
    }
    t
}

/// Compensated (Kahan) summation.
fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

impl DickeState {
    /// Squared norm.
    pub fn norm_sqr(&self) -> f64 {
        kahan_sum(self.amplitudes.iter().map(|a| a.norm_sqr()))
    }

    /// `<S_z>` with `S_z = k - S`.
    pub fn sz_mean(&self) -> f64 {
        let s = self.n_atoms as f64 / 2.0;
        kahan_sum(
            self.amplitudes
                .iter()
                .enumerate()
                .map(|(k, a)| (k as f64 - s) * a.norm_sqr()),
        )
    }

    /// `<S_z^2>`.
    pub fn sz_sq_mean(&self) -> f64 {
        let s = self.n_atoms as f64 / 2.0;
        kahan_sum(
            self.amplitudes
                .iter()
                .enumerate()
                .map(|(k, a)| (k as f64 - s) * (k as f64 - s) * a.norm_sqr()),
        )
    }

    /// `<S_x>` via the ladder operators: `S_x = (S_+ + S_-)/2` and
    /// `S_+|k> = sqrt((N-k)(k+1)) |k+1>`.
    pub fn sx_mean(&self) -> f64 {
        let n = self.n_atoms;
        kahan_sum((0..n).map(|k| {
            let ladder = ((n - k) as f64 * (k + 1) as f64).sqrt();
            (self.amplitudes[k + 1].conj() * self.amplitudes[k]).re * ladder
        }))
    }

    /// `<S^2> = <S_z^2> + (<S_+S_-> + <S_-S_+>)/2`.
    pub fn total_spin_sq(&self) -> f64 {
        let n = self.n_atoms;
        let plus_minus = kahan_sum(
            self.amplitudes
                .iter()
                .enumerate()
                .map(|(k, a)| a.norm_sqr() * (k as f64) * ((n - k + 1) as f64)),
        );
        let minus_plus = kahan_sum(
            self.amplitudes
                .iter()
                .enumerate()
                .map(|(k, a)| a.norm_sqr() * ((n - k) as f64) * ((k + 1) as f64)),
        );
        self.sz_sq_mean() + 0.5 * (plus_minus + minus_plus)
    }
}

/// Coherent spin state pointing along `(theta, phi)`:
/// `c_k = sqrt(C(N,k)) sin(theta/2)^k cos(theta/2)^{N-k} e^{-i k phi}`.
/// Binomials are evaluated in the log domain for stability up to
/// `N ~ 4000`.
pub fn css(n: usize, theta: f64, phi: f64) -> Result<DickeState> {
    if n < 1 {
        return Err(Error::InvalidInput("css: need N >= 1".into()));
    }
    let lnf = ln_factorials(n);
    let (s, c) = (theta / 2.0).sin_cos();
    let mut amplitudes = Vec::with_capacity(n + 1);
    for k in 0..=n {
        // |c_k| = exp(ln sqrt(C(N,k)) + k ln s + (N-k) ln c); a zero base
        // with positive exponent gives amplitude zero.
        let mag = if (s == 0.0 && k > 0) || (c == 0.0 && k < n) {
            0.0
        } else {
            let ln_binom = 0.5 * (lnf[n] - lnf[k] - lnf[n - k]);
            let ls = if k > 0 { k as f64 * s.ln() } else { 0.0 };
            let lc = if k < n { (n - k) as f64 * c.ln() } else { 0.0 };
            (ln_binom + ls + lc).exp()
        };
        amplitudes.push(Complex64::from_polar(mag, -(k as f64) * phi));
    }
    // Rounding in the log-factorial table leaves a relative norm error
    // ~ 1e-10 at N ~ 1000; renormalize exactly.
    let mut state = DickeState { n_atoms: n, amplitudes };
    let scale = 1.0 / state.norm_sqr().sqrt();
    for a in &mut state.amplitudes {
        *a *= scale;
    }
    Ok(state)
}

/// Contrast `C = <S_x>/S` of the state `exp(-i (Q/N) S_z^2)` applied to
/// the equatorial CSS, by exact Dicke-basis summation.
pub fn oat_exact_contrast(n: usize, q: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput("oat_exact_contrast: need N >= 2".into()));
    }
    let mut state = css(n, std::f64::consts::FRAC_PI_2, 0.0)?;
    let s = n as f64 / 2.0;
    for (k, a) in state.amplitudes.iter_mut().enumerate() {
        let m = k as f64 - s;
        *a *= Complex64::from_polar(1.0, -(q / n as f64) * m * m);
    }
    Ok(state.sx_mean() / s)
}

/// Dense scan of the variance-vs-angle curve; returns `(min, max,
/// argmin)`.
pub fn variance_alpha_scan(q: f64, f: f64, n_grid: usize) -> Result<(f64, f64, f64)> {
    if n_grid < 1000 {
        return Err(Error::InvalidInput(
            "variance_alpha_scan: need at least 1000 grid points".into(),
        ));
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut argmin = 0.0;
    for i in 0..n_grid {
        let alpha = std::f64::consts::PI * i as f64 / n_grid as f64;
        let v = 1.0 - q * (2.0 * alpha).sin() + (f + q * q) * alpha.sin() * alpha.sin();
        if v < min {
            min = v;
            argmin = alpha;
        }
        if v > max {
            max = v;
        }
    }
    Ok((min, max, argmin))
}

/// QFI from the fidelity between neighboring coherent states,
/// `F = 8(1 - |<alpha(x0-h/2)|alpha(x0+h/2)>|)/h^2` with the overlap
/// `|<a|b>| = exp(-|a-b|^2/2)`.
pub fn fidelity_qfi(alpha_fn: impl Fn(f64) -> Complex64, x0: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "fidelity_qfi: step must be positive and finite, got {h}"
        )));
    }
    let a = alpha_fn(x0 - h / 2.0);
    let b = alpha_fn(x0 + h / 2.0);
    let overlap = (-(b - a).norm_sqr() / 2.0).exp();
    if !overlap.is_finite() {
        return Err(Error::InvalidInput("fidelity_qfi: non-finite overlap".into()));
    }
    Ok(8.0 * (1.0 - overlap) / (h * h))
}

/// Classical Fisher information of Poisson counting with mean `lambda(x)`:
/// `F_C = (dlambda/dx)^2 / lambda` by central difference.
pub fn poisson_fisher(lambda_fn: impl Fn(f64) -> f64, x0: f64, h: f64) -> Result<f64> {
    let lambda = lambda_fn(x0);
    if !(lambda > 0.0) {
        return Err(Error::InvalidInput(format!(
            "poisson_fisher: mean count must be positive, got {lambda}"
        )));
    }
    let d = (lambda_fn(x0 + h) - lambda_fn(x0 - h)) / (2.0 * h);
    Ok(d * d / lambda)
}

/// Inputs of the adiabatic-elimination effective detuning, expressed in
/// microscopic quantities so the oracle is independent of the cavity and
/// spinlight modules.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveDetuningInput {
    /// Single atom-cavity coupling `g = sqrt(eta*kappa*gamma)/2`.
    pub g: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub t1: f64,
    pub t2: f64,
    /// Coupled atom number.
    pub n_up: f64,
    pub x_a: f64,
    pub x_c: f64,
    /// Drive strength `|beta|^2` in input photons per pulse.
    pub beta_sq: f64,
}

/// Effective detuning result with the validity flag of the
/// adiabatic-elimination conditions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveDetuning {
    pub delta_eff: f64,
    pub valid: bool,
}

/// Effective atomic detuning produced by the driven cavity:
/// `Delta_eff = |beta|^2 (2T1/(T1+T2)) (4g^2/(kappa*Gamma)) x_a u /
/// [(u + G)^2 + (x_c u - x_a G)^2]` with `u = 1 + x_a^2` and
/// `G = 4 g^2 N_up/(kappa*Gamma)`. The validity flag requires the induced
/// shift to stay far below both bare detunings.
pub fn effective_detuning(inp: &EffectiveDetuningInput) -> Result<EffectiveDetuning> {
    if inp.kappa <= 0.0 || inp.gamma <= 0.0 {
        return Err(Error::InvalidInput(
            "effective_detuning: kappa and gamma must be positive".into(),
        ));
    }
    let u = 1.0 + inp.x_a * inp.x_a;
    let gg = 4.0 * inp.g * inp.g * inp.n_up / (inp.kappa * inp.gamma);
    let denom = (u + gg) * (u + gg)
        + (inp.x_c * u - inp.x_a * gg) * (inp.x_c * u - inp.x_a * gg);
    let delta_eff = inp.beta_sq
        * (2.0 * inp.t1 / (inp.t1 + inp.t2))
        * (4.0 * inp.g * inp.g / (inp.kappa * inp.gamma))
        * inp.x_a
        * u
        / denom;
    let det_a = (inp.x_a * inp.gamma / 2.0).abs();
    let det_c = (inp.x_c * inp.kappa / 2.0).abs();
    let valid = det_a > 0.0 && det_c >= 0.0 && delta_eff.abs() <= 1e-2 * det_a.min(det_c.max(det_a));
    Ok(EffectiveDetuning { delta_eff, valid })
}
