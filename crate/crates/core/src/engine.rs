//! Shared steady-state response engine for an ensemble with one or more
//! two-level transitions coupled to the same cavity mode.
//!
//! Each transition contributes `N_i * eta_i * (La + i*Ld)(x_a + b_i)` to the
//! cavity denominator, where `b_i` is its normalized frequency offset from
//! the reference transition. The three-level model is the single-transition
//! special case; the four-level model has a second, Zeeman-shifted
//! transition.

use num_complex::Complex64;

use crate::lorentz::{absorptive, dispersive};

/// One transition: collective coupling `n_eta = N_i * eta_i`, single-atom
/// cooperativity `eta`, and normalized offset `shift` from the reference
/// transition (so its lineshapes are evaluated at `x_a + shift`).
#[derive(Clone, Copy, Debug)]
pub(crate) struct Transition {
    pub n_eta: f64,
    pub eta: f64,
    pub shift: f64,
}

#[derive(Clone, Debug)]
pub(crate) struct Transitions {
    pub terms: Vec<Transition>,
}

impl Transitions {
    pub fn single(n_eta: f64, eta: f64) -> Self {
        Self {
            terms: vec![Transition {
                n_eta,
                eta,
                shift: 0.0,
            }],
        }
    }

    pub fn pair(n_up_eta: f64, eta_up: f64, n_down_eta: f64, eta_down: f64, b: f64) -> Self {
        Self {
            terms: vec![
                Transition {
                    n_eta: n_up_eta,
                    eta: eta_up,
                    shift: 0.0,
                },
                Transition {
                    n_eta: n_down_eta,
                    eta: eta_down,
                    shift: b,
                },
            ],
        }
    }

    /// Real and imaginary parts `(A, B)` of the cavity denominator
    /// `A - i*B = 1 + sum N_i eta_i La_i - i (x_c + sum N_i eta_i Ld_i)`.
    pub fn denominator(&self, x_a: f64, x_c: f64) -> (f64, f64) {
        let mut a = 1.0;
        let mut b = x_c;
        for t in &self.terms {
            a += t.n_eta * absorptive(x_a + t.shift);
            b += t.n_eta * dispersive(x_a + t.shift);
        }
        (a, b)
    }

    /// Symmetric-cavity power transmission `T0 = 1/(A^2 + B^2)`.
    pub fn t0(&self, x_a: f64, x_c: f64) -> f64 {
        let (a, b) = self.denominator(x_a, x_c);
        1.0 / (a * a + b * b)
    }

    /// Derivatives `(dA/dSz, dB/dSz)` for per-transition atom-number
    /// sensitivities `dN_i/dSz = signs[i]`.
    pub fn d_denominator(&self, x_a: f64, signs: &[f64]) -> (f64, f64) {
        let mut da = 0.0;
        let mut db = 0.0;
        for (t, s) in self.terms.iter().zip(signs) {
            da += s * t.eta * absorptive(x_a + t.shift);
            db += s * t.eta * dispersive(x_a + t.shift);
        }
        (da, db)
    }

    /// Intracavity field amplitude relative to the input field,
    /// `i*sqrt(T1)*(finesse/pi) / (A - iB)`.
    pub fn cavity_field(&self, x_a: f64, x_c: f64, t1: f64, finesse: f64) -> Complex64 {
        let (a, b) = self.denominator(x_a, x_c);
        Complex64::new(0.0, t1.sqrt() * finesse / std::f64::consts::PI) / Complex64::new(a, -b)
    }

    /// Transmitted field amplitude relative to the input field,
    /// `-sqrt(T1*T2)*(finesse/pi) / (A - iB)`.
    pub fn transmitted_field(
        &self,
        x_a: f64,
        x_c: f64,
        t1: f64,
        t2: f64,
        finesse: f64,
    ) -> Complex64 {
        let (a, b) = self.denominator(x_a, x_c);
        Complex64::new(-(t1 * t2).sqrt() * finesse / std::f64::consts::PI, 0.0)
            / Complex64::new(a, -b)
    }

    /// Asymmetric-cavity power transmission `T = 4 T1 T2/(T1+T2)^2 * T0`.
    pub fn transmission(&self, x_a: f64, x_c: f64, t1: f64, t2: f64) -> f64 {
        4.0 * t1 * t2 / ((t1 + t2) * (t1 + t2)) * self.t0(x_a, x_c)
    }

    /// Scattered photons into free space per transmitted photon, per
    /// transition: `(2*pi/(T2*finesse)) * N_i eta_i La_i`.
    pub fn scatter_per_transmit(&self, x_a: f64, t2: f64, finesse: f64) -> Vec<f64> {
        self.terms
            .iter()
            .map(|t| 2.0 * std::f64::consts::PI / (t2 * finesse) * t.n_eta * absorptive(x_a + t.shift))
            .collect()
    }
}
