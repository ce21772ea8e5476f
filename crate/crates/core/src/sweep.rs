//! Parameter scans and deterministic optimizers: Wineland-vs-detuning
//! scans, joint photon/detuning gain optimization, atom-number scaling
//! fits, and detection-variance scans.

use rayon::prelude::*;

use crate::cavity::{AtomParams, CavityParams, ProbePoint};
use crate::fourlevel::{per_photon, FourLevelPoint, RamanModel};
use crate::gaussian::{contrast, wineland, xi2_ku};
use crate::lorentz::{absorptive, dispersive};
use crate::qfi::{detection_variance, total_f, DetectionSetup};
use crate::spinlight::{phase_shift, photon_budget, shearing, BudgetSpec};
use crate::{Error, Result};

/// Which atomic model a scan evaluates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelKind {
    ThreeLevel,
    FourLevel,
}

/// The scanned variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScanVariable {
    /// Normalized probe-atom detuning.
    XA,
    /// Scattered photon number.
    NSc,
    /// Total atom number.
    NAtoms,
    /// Detected photon number (detection scans).
    NDetected,
    /// Blue-pulse detuning (two-color scans).
    OmegaL1,
}

/// Fixed context shared by all grid points of a scan.
#[derive(Clone, Debug)]
pub struct ScanContext {
    pub cav: CavityParams,
    pub atoms: AtomParams,
    /// Total atom number `N`.
    pub n_atoms: f64,
    /// Authoritative photon budget entry applied at every point.
    pub budget: BudgetSpec,
    pub tau: f64,
    pub curvature: bool,
    pub model: ModelKind,
    /// Default detuning when it is not the scanned variable.
    pub x_a: f64,
    /// Fixed normalized cavity detuning; `None` keeps the cavity on the
    /// atomic resonance (`x_c = x_a * Gamma / kappa`).
    pub x_c: Option<f64>,
}

impl ScanContext {
    fn x_c_for(&self, x_a: f64) -> Result<f64> {
        match self.x_c {
            Some(x_c) => Ok(x_c),
            None => Ok(x_a * self.atoms.gamma / self.cav.kappa()?),
        }
    }
}

/// One scan row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub value: f64,
    pub q: f64,
    pub f: f64,
    pub delta_phi: f64,
    pub contrast: f64,
    pub xi2_ku: f64,
    pub xi2: f64,
    pub n_t: f64,
    pub n_sc: f64,
}

/// Scan output; rows are ordered by grid index.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
}

/// Scan request.
#[derive(Clone, Debug)]
pub struct ScanSpec {
    pub variable: ScanVariable,
    pub grid: Vec<f64>,
    pub context: ScanContext,
}

impl ScanSpec {
    fn validate(&self) -> Result<()> {
        if self.grid.len() < 2 {
            return Err(Error::InvalidInput("scan: grid needs at least 2 points".into()));
        }
        let inc = self.grid.windows(2).all(|w| w[1] > w[0]);
        let dec = self.grid.windows(2).all(|w| w[1] < w[0]);
        if !(inc || dec) {
            return Err(Error::InvalidInput("scan: grid must be strictly monotone".into()));
        }
        Ok(())
    }
}

/// Evaluates one squeezing-scan point.
fn evaluate_point(ctx: &ScanContext, value: f64, x_a: f64, budget: BudgetSpec) -> Result<ScanRow> {
    let x_c = ctx.x_c_for(x_a)?;
    let n = ctx.n_atoms;
    let (q, f, delta_phi, n_t, n_sc) = match ctx.model {
        ModelKind::ThreeLevel => {
            let p = ProbePoint::new(x_a, x_c, n / 2.0, budget, ctx.tau);
            let b = photon_budget(&ctx.cav, &ctx.atoms, &p)?;
            let eff = shearing(&ctx.cav, &ctx.atoms, &p, &b)?;
            let f = total_f(&ctx.cav, &ctx.atoms, &p, &b);
            let dphi = phase_shift(&ctx.cav, &ctx.atoms, &p, &b)?;
            (eff.q, f, dphi, b.n_t, b.n_sc)
        }
        ModelKind::FourLevel => {
            let flp = FourLevelPoint::equator(&ctx.atoms, n, x_a, x_c);
            let pp = per_photon(&ctx.cav, &flp);
            let sc_per_in = pp.n_sc_up + pp.n_sc_down;
            let n_in = match budget {
                BudgetSpec::NIn(v) => v,
                BudgetSpec::NT(v) => v / pp.n_t,
                BudgetSpec::NSc(v) => {
                    if sc_per_in == 0.0 {
                        if v > 0.0 {
                            return Err(Error::Inconsistent(
                                "four-level scan: scattered photons requested but the \
                                 configuration cannot scatter"
                                    .into(),
                            ));
                        }
                        0.0
                    } else {
                        v / sc_per_in
                    }
                }
                BudgetSpec::NC(_) => {
                    return Err(Error::InvalidInput(
                        "four-level scan: intracavity budget not supported".into(),
                    ))
                }
            };
            (
                pp.q * n_in,
                pp.f * n_in,
                pp.delta_phi * n_in,
                pp.n_t * n_in,
                sc_per_in * n_in,
            )
        }
    };
    let ku = xi2_ku(q, f)?.minus;
    let xi2 = wineland(q, f, n_sc, n, ctx.curvature)?;
    let c = contrast(q, n_sc, n)?;
    let c_used = if ctx.curvature { c.total } else { c.scattering };
    Ok(ScanRow {
        value,
        q,
        f,
        delta_phi,
        contrast: c_used,
        xi2_ku: ku,
        xi2,
        n_t,
        n_sc,
    })
}

/// Squeezing scan over detuning or photon number; grid points are
/// evaluated in parallel and reported in grid order.
pub fn wineland_scan(spec: &ScanSpec) -> Result<ScanResult> {
    spec.validate()?;
    let ctx = &spec.context;
    let rows: Result<Vec<ScanRow>> = spec
        .grid
        .par_iter()
        .map(|&v| match spec.variable {
            ScanVariable::XA => evaluate_point(ctx, v, v, ctx.budget),
            ScanVariable::NSc => evaluate_point(ctx, v, ctx.x_a, BudgetSpec::NSc(v)),
            ScanVariable::NAtoms => {
                let mut c = ctx.clone();
                c.n_atoms = v;
                evaluate_point(&c, v, ctx.x_a, ctx.budget)
            }
            _ => Err(Error::InvalidInput(
                "wineland_scan: variable must be x_a, n_sc or N".into(),
            )),
        })
        .collect();
    Ok(ScanResult { rows: rows? })
}

/// Deterministic golden-section minimization of a unimodal function.
fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol * (a.abs() + b.abs() + 1e-300) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Joint optimum of the Wineland parameter over detuning and photon
/// number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GainOptimum {
    pub x_a: f64,
    /// Optimal scattered photon number.
    pub n_sc: f64,
    /// Optimal scattered fraction `p = n_sc/N`.
    pub p: f64,
    pub xi2: f64,
}

/// Closed-form Wineland objective with the cavity on the atomic
/// resonance: `nu = (N/2) eta`, `x_c = x_a Gamma/kappa`.
fn xi2_objective(atoms: &AtomParams, kappa: f64, n: f64, x_a: f64, p: f64, curvature: bool) -> f64 {
    let eta = atoms.eta;
    let nu = n / 2.0 * eta;
    let x_c = x_a * atoms.gamma / kappa;
    let la = absorptive(x_a);
    let ld = dispersive(x_a);
    let a = 1.0 + nu * la;
    let b = x_c + nu * ld;
    let t0 = 1.0 / (a * a + b * b);
    let n_sc = p * n;
    let q = -2.0 * n_sc * eta * ld * (1.0 - x_c * x_a + nu) * t0;
    let f = 2.0 * n_sc * eta * la * (1.0 + x_a * x_a + nu / 2.0) * t0;
    wineland(q, f, n_sc, n, curvature).unwrap_or(f64::INFINITY)
}

/// Per-detuning photon optimization followed by detuning maximization:
/// coarse log grid (64 points/decade) over `x_a in [1, 20*sqrt(nu
/// kappa/Gamma)]`, golden-section refinement on each axis to relative
/// tolerance 1e-4. Deterministic; ties break toward smaller `x_a`, then
/// smaller `n_sc`.
pub fn optimize_gain(
    cav: &CavityParams,
    atoms: &AtomParams,
    n: f64,
    curvature: bool,
) -> Result<GainOptimum> {
    if n < 2.0 {
        return Err(Error::InvalidInput(format!(
            "optimize_gain: need N >= 2, got {n}"
        )));
    }
    let kappa = cav.kappa()?;
    let nu = n / 2.0 * atoms.eta;
    let x_hi = 20.0 * (nu * kappa / atoms.gamma).sqrt();
    let (p_lo, p_hi) = (1e-4f64.ln(), 3.0f64.ln());
    let best_p_at = |x_a: f64| {
        let f = |lp: f64| xi2_objective(atoms, kappa, n, x_a, lp.exp(), curvature);
        let (lp, v) = golden_min(&f, p_lo, p_hi, 1e-5);
        (lp.exp(), v)
    };
    let decades = (x_hi / 1.0).log10();
    let points = ((decades * 64.0).ceil() as usize).max(8);
    let mut best: Option<(usize, f64, f64, f64)> = None; // (index, x_a, p, value)
    let grid: Vec<f64> = (0..=points)
        .map(|i| 10f64.powf(decades * i as f64 / points as f64))
        .collect();
    let evals: Vec<(f64, f64)> = grid.par_iter().map(|&x| best_p_at(x)).collect();
    for (i, (&x, &(p, v))) in grid.iter().zip(evals.iter()).enumerate() {
        let better = match best {
            None => true,
            Some((_, bx, bp, bv)) => v < bv || (v == bv && (x < bx || (x == bx && p < bp))),
        };
        if better {
            best = Some((i, x, p, v));
        }
    }
    let (idx, _, _, _) = best.unwrap();
    let lo = grid[idx.saturating_sub(1)];
    let hi = grid[(idx + 1).min(points)];
    let f_outer = |lx: f64| best_p_at(lx.exp()).1;
    let (lx, _) = golden_min(&f_outer, lo.ln(), hi.ln(), 1e-5);
    let x_a = lx.exp();
    let (p, v) = best_p_at(x_a);
    Ok(GainOptimum {
        x_a,
        n_sc: p * n,
        p,
        xi2: v,
    })
}

/// Least-squares power-law fit on log-log axes; returns the exponent and
/// its standard error.
pub fn scaling_fit(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "scaling_fit: need at least 4 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::InvalidInput(
            "scaling_fit: all coordinates must be positive".into(),
        ));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("scaling_fit: degenerate abscissa".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let dof = (points.len() as f64 - 2.0).max(1.0);
    let stderr = (ss_res / dof / sxx).sqrt();
    Ok((slope, stderr))
}

/// One detection-scan row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectionRow {
    /// Detected photon number.
    pub n_d: f64,
    /// Input photon number producing it.
    pub n_in: f64,
    /// Readout variance in SQL units.
    pub sigma_sq: f64,
    /// The same in dB.
    pub db: f64,
}

/// Detection-scan output with the minimum row index.
#[derive(Clone, Debug, PartialEq)]
pub struct DetectionScanResult {
    pub rows: Vec<DetectionRow>,
    pub min_index: usize,
}

/// Readout variance over a detected-photon-number grid at a fixed
/// carrier probe point.
pub fn detection_scan(
    cav: &CavityParams,
    atoms: &AtomParams,
    carrier: &ProbePoint,
    setup: &DetectionSetup,
    raman: &RamanModel,
    n_d_grid: &[f64],
) -> Result<DetectionScanResult> {
    if n_d_grid.len() < 2 {
        return Err(Error::InvalidInput("detection_scan: grid needs >= 2 points".into()));
    }
    // Per-photon quantities at unit input.
    let unit = ProbePoint {
        budget: BudgetSpec::NIn(1.0),
        ..*carrier
    };
    let ub = photon_budget(cav, atoms, &unit)?;
    let base = detection_variance(cav, atoms, &unit, setup, &ub, raman)?;
    if base.n_t_per_photon <= 0.0 {
        return Err(Error::Inconsistent(
            "detection_scan: no transmission at the carrier point".into(),
        ));
    }
    let mut rows = Vec::with_capacity(n_d_grid.len());
    let mut min_index = 0;
    for (i, &n_d) in n_d_grid.iter().enumerate() {
        if n_d < 0.0 {
            return Err(Error::InvalidInput(format!(
                "detection_scan: detected photon number must be >= 0, got {n_d}"
            )));
        }
        let n_in = n_d / (setup.q_eff * base.n_t_per_photon);
        let p = ProbePoint {
            budget: BudgetSpec::NIn(n_in),
            ..*carrier
        };
        let b = photon_budget(cav, atoms, &p)?;
        let d = detection_variance(cav, atoms, &p, setup, &b, raman)?;
        let row = DetectionRow {
            n_d,
            n_in,
            sigma_sq: d.sigma_sq,
            db: 10.0 * d.sigma_sq.log10(),
        };
        if row.sigma_sq < rows.get(min_index).map_or(f64::INFINITY, |r: &DetectionRow| r.sigma_sq)
        {
            min_index = i;
        }
        rows.push(row);
    }
    Ok(DetectionScanResult { rows, min_index })
}
