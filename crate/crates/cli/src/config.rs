//! Config ingestion: a sectioned TOML file with frequencies in ordinary
//! Hz, converted to the library's internal angular units (numerically,
//! frequencies are carried as the MHz value of the ordinary frequency;
//! durations as angular phase per MHz, so that rate * duration products
//! are dimensionless).

use std::f64::consts::PI;

use cavity_squeeze_core::cavity::{AtomParams, CavityParams};
use cavity_squeeze_core::spinlight::BudgetSpec;
use serde::{Deserialize, Serialize};

/// Ordinary frequency in Hz -> internal units (2*pi x MHz).
fn hz_to_internal(hz: f64) -> f64 {
    hz / 1e6
}

/// Duration in seconds -> internal units (inverse of the above, so that
/// e.g. kappa * tau is dimensionless).
fn seconds_to_internal(s: f64) -> f64 {
    2.0 * PI * 1e6 * s
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySection {
    pub t1: f64,
    pub t2: f64,
    #[serde(default)]
    pub l1: f64,
    #[serde(default)]
    pub l2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finesse: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fsr_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waist_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelength_m: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomsSection {
    pub gamma_hz: f64,
    pub eta: f64,
    /// eta_down / eta; 0 disables the second transition.
    #[serde(default)]
    pub eta_down_ratio: f64,
    #[serde(default)]
    pub delta_z_hz: f64,
    /// Raman branching fraction of down-transition scattering.
    #[serde(default = "default_branching")]
    pub branching: f64,
}

fn default_branching() -> f64 {
    2.0 / 3.0
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    /// Normalized probe-atom detuning 2*(omega_l - omega_a)/Gamma.
    pub x_a: f64,
    /// Normalized probe-cavity detuning; omitted keeps the cavity on the
    /// atomic resonance (x_c = x_a * Gamma / kappa).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_c: Option<f64>,
    /// Total atom number N.
    pub n_atoms: f64,
    /// Which photon count is authoritative: n_in | n_t | n_sc | n_c.
    pub budget: String,
    pub photons: f64,
    pub tau_s: f64,
    /// three_level | four_level.
    #[serde(default = "default_model")]
    pub model: String,
    #[serde(default)]
    pub curvature: bool,
    #[serde(default = "default_q_eff")]
    pub q_eff: f64,
}

fn default_model() -> String {
    "three_level".into()
}

fn default_q_eff() -> f64 {
    0.15
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    /// x_a | n_sc | n_atoms | n_d | omega_l1.
    pub variable: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    /// linear | log.
    #[serde(default = "default_scale")]
    pub scale: String,
}

fn default_scale() -> String {
    "linear".into()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub cavity: CavitySection,
    pub atoms: AtomsSection,
    pub probe: ProbeSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanSection>,
}

/// A config error with the offending key path.
#[derive(Debug)]
pub struct ConfigError {
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.message)
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError {
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let c = &self.cavity;
        if !(c.t1 > 0.0 && c.t2 > 0.0 && c.l1 >= 0.0 && c.l2 >= 0.0) {
            return Err(ConfigError {
                message: "cavity.t1/t2 must be > 0 and cavity.l1/l2 >= 0".into(),
            });
        }
        if c.kappa_hz.is_none() && (c.fsr_hz.is_none() || c.finesse.is_none()) {
            return Err(ConfigError {
                message: "cavity: supply kappa_hz, or fsr_hz together with finesse".into(),
            });
        }
        let a = &self.atoms;
        if !(a.gamma_hz > 0.0 && a.eta > 0.0) {
            return Err(ConfigError {
                message: "atoms.gamma_hz and atoms.eta must be > 0".into(),
            });
        }
        if !(0.0..=1.0).contains(&a.eta_down_ratio) || !(0.0..=1.0).contains(&a.branching) {
            return Err(ConfigError {
                message: "atoms.eta_down_ratio and atoms.branching must be in [0, 1]".into(),
            });
        }
        let p = &self.probe;
        if !(p.n_atoms >= 0.0 && p.photons >= 0.0 && p.tau_s > 0.0) {
            return Err(ConfigError {
                message: "probe.n_atoms/photons must be >= 0 and probe.tau_s > 0".into(),
            });
        }
        if !matches!(p.budget.as_str(), "n_in" | "n_t" | "n_sc" | "n_c") {
            return Err(ConfigError {
                message: format!("probe.budget: unknown kind {:?}", p.budget),
            });
        }
        if !matches!(p.model.as_str(), "three_level" | "four_level") {
            return Err(ConfigError {
                message: format!("probe.model: unknown model {:?}", p.model),
            });
        }
        if !(p.q_eff > 0.0 && p.q_eff <= 1.0) {
            return Err(ConfigError {
                message: "probe.q_eff must be in (0, 1]".into(),
            });
        }
        if let Some(s) = &self.scan {
            if !matches!(s.variable.as_str(), "x_a" | "n_sc" | "n_atoms" | "n_d" | "omega_l1") {
                return Err(ConfigError {
                    message: format!("scan.variable: unknown variable {:?}", s.variable),
                });
            }
            if !matches!(s.scale.as_str(), "linear" | "log") {
                return Err(ConfigError {
                    message: format!("scan.scale: unknown scale {:?}", s.scale),
                });
            }
            if s.points < 2 || !(s.max > s.min) {
                return Err(ConfigError {
                    message: "scan: need points >= 2 and max > min".into(),
                });
            }
            if s.scale == "log" && s.min <= 0.0 {
                return Err(ConfigError {
                    message: "scan: log scale needs min > 0".into(),
                });
            }
        }
        Ok(())
    }

    pub fn cavity_params(&self) -> CavityParams {
        let c = &self.cavity;
        CavityParams {
            t1: c.t1,
            t2: c.t2,
            l1: c.l1,
            l2: c.l2,
            finesse: c.finesse,
            kappa: c.kappa_hz.map(hz_to_internal),
            fsr: c.fsr_hz.map(hz_to_internal),
            waist: c.waist_m,
            wavelength: c.wavelength_m,
        }
    }

    pub fn atom_params(&self) -> AtomParams {
        let a = &self.atoms;
        AtomParams {
            gamma: hz_to_internal(a.gamma_hz),
            eta: a.eta,
            eta_up: a.eta,
            eta_down: a.eta * a.eta_down_ratio,
            delta_z: hz_to_internal(a.delta_z_hz),
        }
    }

    pub fn budget_spec(&self) -> BudgetSpec {
        match self.probe.budget.as_str() {
            "n_in" => BudgetSpec::NIn(self.probe.photons),
            "n_t" => BudgetSpec::NT(self.probe.photons),
            "n_sc" => BudgetSpec::NSc(self.probe.photons),
            _ => BudgetSpec::NC(self.probe.photons),
        }
    }

    pub fn tau(&self) -> f64 {
        seconds_to_internal(self.probe.tau_s)
    }

    /// The scan grid, or `None` when the config has no scan section.
    pub fn grid(&self) -> Option<Vec<f64>> {
        let s = self.scan.as_ref()?;
        let n = s.points;
        let mut grid = Vec::with_capacity(n);
        for i in 0..n {
            let f = i as f64 / (n - 1) as f64;
            grid.push(if s.scale == "log" {
                s.min * (s.max / s.min).powf(f)
            } else {
                s.min + (s.max - s.min) * f
            });
        }
        Some(grid)
    }
}
