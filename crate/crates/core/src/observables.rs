//! Diffraction efficiencies and the energy budget. Only propagating orders
//! carry power; the reflectance and transmittance are weighted sums of
//! |coefficient|^2 over those orders, and the absorbance closes the budget:
//!
//! ```text
//! R = sum_{p in prop_u} (gamma_{u,p} / gamma_{u,0}) |U_p|^2
//! T = sum_{p in prop_w} (gamma_{w,p} / gamma_{u,0}) |W_p|^2
//! A = 1 - R - (tau_w / tau_u) T
//! ```
//!
//! The transmittance weight tau_w / tau_u (eps_u / eps_w in TM, 1 in TE) is
//! what makes A vanish identically for a conductivity-free interface.

use crate::error::SolveError;
use crate::params::PhysicalConfig;
use crate::spectral::{SpectralGrid, SurfaceField};

/// Per-order efficiencies and scalar observables for one solved point.
#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    /// (order p, reflected efficiency) over the upper propagating set.
    pub e_u: Vec<(i64, f64)>,
    /// (order p, transmitted efficiency) over the lower propagating set.
    pub e_w: Vec<(i64, f64)>,
    pub r: f64,
    pub t: f64,
    pub a: f64,
    /// 1 - R - (tau_w/tau_u) T - A; identically zero by construction and kept
    /// as an explicit budget line.
    pub energy_defect: f64,
    /// Set when both surface fields are identically zero, in which case the
    /// R = T = 0, A = 1 report is a placeholder rather than physics.
    pub degenerate: bool,
}

/// Compute efficiencies from the solved surface fields.
pub fn efficiencies(
    grid: &SpectralGrid,
    phys: &PhysicalConfig,
    u: &SurfaceField,
    w: &SurfaceField,
) -> Result<Observables, SolveError> {
    if u.len() != grid.n_x || w.len() != grid.n_x {
        return Err(SolveError::LengthMismatch {
            got: u.len().min(w.len()),
            expected: grid.n_x,
        });
    }
    let gamma0 = phys.gamma_u0;
    if !(gamma0 > 0.0) {
        return Err(SolveError::GrazingIncidence);
    }
    let degenerate = u.l2_norm() == 0.0 && w.l2_norm() == 0.0;

    let mut e_u = Vec::with_capacity(grid.prop_u.len());
    let mut r = 0.0;
    for &p in &grid.prop_u {
        let bin = grid.bin_of(p);
        let e = grid.gamma_u[bin].re * u.coeff(p).norm_sqr() / gamma0;
        e_u.push((p, e));
        r += e;
    }
    let mut e_w = Vec::with_capacity(grid.prop_w.len());
    let mut t = 0.0;
    for &p in &grid.prop_w {
        let bin = grid.bin_of(p);
        let e = grid.gamma_w[bin].re * w.coeff(p).norm_sqr() / gamma0;
        e_w.push((p, e));
        t += e;
    }
    let weight = phys.tau_w / phys.tau_u;
    let a = 1.0 - r - weight * t;
    let energy_defect = 1.0 - r - weight * t - a;
    Ok(Observables {
        e_u,
        e_w,
        r,
        t,
        a,
        energy_defect,
        degenerate,
    })
}
