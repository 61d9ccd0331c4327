//! High-order perturbation of envelopes: expand the surface unknowns in the
//! envelope deformation, {U, W} = sum_l {U_l, W_l} delta^l, solve each order
//! against the constant-envelope operator, and sum the series by Taylor or
//! Pade.
//!
//! The order-l right-hand side moves the X1-dependent part of the interface
//! operator to the right: in TM it is (-A[X1 (tau_w J0 W_{l-1})], 0), in TE
//! (0, B[X1 W_{l-1}]), where A and B act AFTER the pointwise product, so the
//! lateral derivative inside the nonlocal term differentiates the product.

use num_complex::Complex64;

use crate::conductivity::{Envelope, SigmaPair};
use crate::error::SolveError;
use crate::pade;
use crate::params::{PhysicalConfig, Polarization};
use crate::solver::solve_order0;
use crate::spectral::{SpectralGrid, SurfaceField};

/// The computed perturbation orders and their norm trace.
#[derive(Debug, Clone)]
pub struct HopeSeries {
    /// (U_l, W_l) for l = 0..=L.
    pub orders: Vec<(SurfaceField, SurfaceField)>,
    /// (||U_l||, ||W_l||) in the s = 0 Sobolev (discrete L2) norm.
    pub norm_trace: Vec<(f64, f64)>,
}

impl HopeSeries {
    pub fn l_max(&self) -> usize {
        self.orders.len() - 1
    }
}

/// Surface traces of the incident plane wave in the quasiperiodic basis:
/// xi = -exp(i alpha x) has the single coefficient -1 at p = 0, and
/// nu = -dN v_inc has i gamma_u at p = 0.
pub fn incident_traces(
    phys: &PhysicalConfig,
    grid: &SpectralGrid,
) -> (SurfaceField, SurfaceField) {
    let mut xi = SurfaceField::zeros(grid.n_x);
    xi.set_coeff(0, Complex64::new(-1.0, 0.0));
    let mut nu = SurfaceField::zeros(grid.n_x);
    nu.set_coeff(0, Complex64::i() * phys.gamma_u0);
    (xi, nu)
}

/// Run the envelope recursion up to order `l_max` (inclusive).
pub fn hope_recursion(
    grid: &SpectralGrid,
    phys: &PhysicalConfig,
    sigma: &SigmaPair,
    envelope: &Envelope,
    l_max: usize,
) -> Result<HopeSeries, SolveError> {
    if envelope.samples_x1.len() != grid.n_x {
        return Err(SolveError::LengthMismatch {
            got: envelope.samples_x1.len(),
            expected: grid.n_x,
        });
    }
    let x0 = envelope.x0;
    let (xi, nu) = incident_traces(phys, grid);
    let q0 = xi;
    let r0 = nu.scaled(Complex64::new(-phys.tau_u, 0.0));

    let mut orders: Vec<(SurfaceField, SurfaceField)> = Vec::with_capacity(l_max + 1);
    let mut norm_trace = Vec::with_capacity(l_max + 1);

    let (u0, w0) = solve_order0(grid, phys, sigma, x0, &q0, &r0)?;
    if !u0.is_finite() || !w0.is_finite() {
        return Err(SolveError::Divergent { order: 0 });
    }
    norm_trace.push((sobolev_norm(&u0, 0.0), sobolev_norm(&w0, 0.0)));
    orders.push((u0, w0));

    for l in 1..=l_max {
        let w_prev = &orders[l - 1].1;
        let zero = SurfaceField::zeros(grid.n_x);
        let (q, r) = match phys.polarization {
            Polarization::TM => {
                let trace = grid
                    .dno_lower(w_prev)?
                    .scaled(Complex64::new(phys.tau_w, 0.0));
                let product = grid.pointwise_multiply(&envelope.samples_x1, &trace)?;
                let q = grid
                    .apply_a(sigma, &product)?
                    .scaled(Complex64::new(-1.0, 0.0));
                (q, zero)
            }
            Polarization::TE => {
                let product = grid.pointwise_multiply(&envelope.samples_x1, w_prev)?;
                let r = grid.apply_b(sigma, &product)?;
                (zero, r)
            }
        };
        let (u, w) = solve_order0(grid, phys, sigma, x0, &q, &r)?;
        if !u.is_finite() || !w.is_finite() {
            return Err(SolveError::Divergent { order: l });
        }
        norm_trace.push((sobolev_norm(&u, 0.0), sobolev_norm(&w, 0.0)));
        orders.push((u, w));
    }
    Ok(HopeSeries { orders, norm_trace })
}

/// Taylor (Horner) summation of the series at deformation `delta`.
pub fn taylor_sum(series: &HopeSeries, delta: f64) -> (SurfaceField, SurfaceField) {
    let n = series.orders[0].0.len();
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for (ul, wl) in series.orders.iter().rev() {
        for bin in 0..n {
            u[bin] = u[bin] * delta + ul.bins()[bin];
            w[bin] = w[bin] * delta + wl.bins()[bin];
        }
    }
    (SurfaceField::from_bins(u), SurfaceField::from_bins(w))
}

/// Pade [M/N] summation at deformation `delta`, applied independently to each
/// coefficient's series. Returns the fields and the number of coefficient
/// sequences (out of 2 N_x) that fell back to Taylor.
pub fn pade_sum(
    series: &HopeSeries,
    delta: f64,
    m: usize,
    n: usize,
) -> ((SurfaceField, SurfaceField), usize) {
    let l = series.l_max();
    assert!(m + n <= l, "[{m}/{n}] needs M+N <= L = {l}");
    let nx = series.orders[0].0.len();
    let mut fallbacks = 0usize;
    let mut out = [
        vec![Complex64::new(0.0, 0.0); nx],
        vec![Complex64::new(0.0, 0.0); nx],
    ];
    let mut seq = vec![Complex64::new(0.0, 0.0); l + 1];
    for (side, out_side) in out.iter_mut().enumerate() {
        for bin in 0..nx {
            for (li, order) in series.orders.iter().enumerate() {
                seq[li] = if side == 0 {
                    order.0.bins()[bin]
                } else {
                    order.1.bins()[bin]
                };
            }
            let (value, fell_back) = pade::pade_eval(&seq, delta, m, n);
            if fell_back {
                fallbacks += 1;
            }
            out_side[bin] = value;
        }
    }
    let [u, w] = out;
    (
        (SurfaceField::from_bins(u), SurfaceField::from_bins(w)),
        fallbacks,
    )
}

/// Discrete Sobolev norm: || f ||_{H^s}^2 = sum_p (1 + p^2)^s |f_p|^2, with p
/// the symmetric mode index.
pub fn sobolev_norm(field: &SurfaceField, s: f64) -> f64 {
    let n = field.len() as i64;
    let half = n / 2;
    let mut acc = 0.0;
    for p in -half..half {
        let weight = if s == 0.0 {
            1.0
        } else {
            (1.0 + (p * p) as f64).powf(s)
        };
        acc += weight * field.coeff(p).norm_sqr();
    }
    acc.sqrt()
}
