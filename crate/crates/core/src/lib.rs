//! Numerics for collective spin-light interaction in a two-mirror optical
//! cavity: steady-state cavity response, light-induced spin squeezing,
//! quantum Fisher information, Gaussian collective-spin evolution, the
//! four-level/two-color extensions, and exact small-N validators.
//!
//! Conventions used throughout:
//!
//! * Detunings are normalized: `x_a = 2(omega_l - omega_a)/Gamma` measures
//!   the probe relative to the atomic resonance in half-linewidths, and
//!   `x_c = 2(omega_l - omega_c)/kappa` relative to the cavity resonance.
//! * All physical frequencies are angular (rad/s). Configuration layers
//!   convert ordinary frequencies at ingestion.
//! * Spin variances are reported in standard-quantum-limit (SQL) units:
//!   the coherent-spin-state transverse variance is 1.

pub mod cavity;
pub mod error;
pub mod fourlevel;
pub mod gaussian;
pub mod lorentz;
pub mod oracle;
pub mod qfi;
pub mod spinlight;
pub mod sweep;

pub(crate) mod engine;

pub use error::{Error, Result};
