//! Direct dense solver for the interface system at a fixed envelope: the full
//! operator (including the envelope convolution) is assembled as a
//! 2 N_x x 2 N_x complex matrix over the Fourier coefficients and solved by
//! partially pivoted Gaussian elimination.
//!
//! Rows and columns use the ascending symmetric ordering p_i = i - N_x/2, with
//! the U coefficients in the first block and W in the second. Row block one is
//! the field-continuity equation, row block two the flux equation. The
//! envelope enters through the circulant convolution matrix
//! C_ij = X1hat(p_i - p_j), so the assembled matrix is exactly the FFT-based
//! operator written out densely.

use num_complex::Complex64;

use crate::conductivity::{Envelope, SigmaPair};
use crate::error::SolveError;
use crate::params::{PhysicalConfig, Polarization};
use crate::spectral::{SpectralGrid, SurfaceField};

/// Condition-number proxy (max |pivot| / min |pivot|) above which the solve is
/// reported as singular rather than returning garbage.
const CONDITION_LIMIT: f64 = 1e14;

/// A dense linear system over the stacked coefficient vector [U; W].
#[derive(Debug, Clone)]
pub struct DenseSystem {
    pub n_x: usize,
    /// Row-major (2 n_x) x (2 n_x).
    pub matrix: Vec<Complex64>,
    pub rhs: Vec<Complex64>,
}

/// Assemble the dense interface system for deformation `delta`.
pub fn assemble(
    grid: &SpectralGrid,
    phys: &PhysicalConfig,
    sigma: &SigmaPair,
    envelope: &Envelope,
    delta: f64,
) -> Result<DenseSystem, SolveError> {
    let n = grid.n_x;
    if envelope.samples_x1.len() != n {
        return Err(SolveError::LengthMismatch {
            got: envelope.samples_x1.len(),
            expected: n,
        });
    }
    let samples: Vec<Complex64> = envelope
        .samples_x1
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    let x1_hat = grid.from_physical(&samples)?;
    let x0 = envelope.x0;
    let i = Complex64::i();
    let half = (n / 2) as i64;

    // Per-index diagonal factors in ascending order.
    let mut gam_u = vec![Complex64::new(0.0, 0.0); n];
    let mut gam_w = vec![Complex64::new(0.0, 0.0); n];
    let mut symbol = vec![Complex64::new(0.0, 0.0); n];
    for idx in 0..n {
        let bin = grid.bin_of(idx as i64 - half);
        gam_u[idx] = grid.gamma_u[bin];
        gam_w[idx] = grid.gamma_w[bin];
        symbol[idx] = grid.sigma_symbol(sigma, bin);
    }

    let dim = 2 * n;
    let mut matrix = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut entry = |row: usize, col: usize, value: Complex64| {
        matrix[row * dim + col] = value;
    };
    for row in 0..n {
        for col in 0..n {
            let diag = if row == col {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            // Envelope multiplication operator X0 I + delta C.
            let env = x0 * diag + delta * x1_hat.coeff(row as i64 - col as i64);
            match phys.polarization {
                Polarization::TM => {
                    let a_row = symbol[row] / (i * phys.k0);
                    entry(row, col, diag);
                    entry(
                        row,
                        n + col,
                        -diag + a_row * env * phys.tau_w * (-i * gam_w[col]),
                    );
                    entry(n + row, col, phys.tau_u * (-i * gam_u[row]) * diag);
                    entry(n + row, n + col, phys.tau_w * (-i * gam_w[row]) * diag);
                }
                Polarization::TE => {
                    let b_row = i * phys.k0 * symbol[row];
                    entry(row, col, diag);
                    entry(row, n + col, -diag);
                    entry(n + row, col, -i * gam_u[row] * diag);
                    entry(n + row, n + col, -i * gam_w[row] * diag - b_row * env);
                }
            }
        }
    }

    // Incident forcing: xi has coefficient -1 at p = 0, nu has i gamma_u0; the
    // flux row carries -tau_u nu.
    let mut rhs = vec![Complex64::new(0.0, 0.0); dim];
    let p0 = n / 2;
    rhs[p0] = Complex64::new(-1.0, 0.0);
    rhs[n + p0] = -phys.tau_u * i * phys.gamma_u0;

    Ok(DenseSystem { n_x: n, matrix, rhs })
}

/// Apply the full interface operator at deformation `delta` to (U, W) via
/// FFTs, without assembling the matrix. Returns the two equation rows.
pub fn operator_apply(
    grid: &SpectralGrid,
    phys: &PhysicalConfig,
    sigma: &SigmaPair,
    envelope: &Envelope,
    delta: f64,
    u: &SurfaceField,
    w: &SurfaceField,
) -> Result<(SurfaceField, SurfaceField), SolveError> {
    if envelope.samples_x1.len() != grid.n_x {
        return Err(SolveError::LengthMismatch {
            got: envelope.samples_x1.len(),
            expected: grid.n_x,
        });
    }
    let x_full = envelope.full_samples(delta);
    match phys.polarization {
        Polarization::TM => {
            let trace = grid
                .dno_lower(w)?
                .scaled(Complex64::new(phys.tau_w, 0.0));
            let product = grid.pointwise_multiply(&x_full, &trace)?;
            let row1 = u.sub(w).add_scaled(
                &grid.apply_a(sigma, &product)?,
                Complex64::new(1.0, 0.0),
            );
            let row2 = grid
                .dno_upper(u)?
                .scaled(Complex64::new(phys.tau_u, 0.0))
                .add_scaled(&grid.dno_lower(w)?, Complex64::new(phys.tau_w, 0.0));
            Ok((row1, row2))
        }
        Polarization::TE => {
            let row1 = u.sub(w);
            let product = grid.pointwise_multiply(&x_full, w)?;
            let row2 = grid
                .dno_upper(u)?
                .add_scaled(&grid.dno_lower(w)?, Complex64::new(1.0, 0.0))
                .sub(&grid.apply_b(sigma, &product)?);
            Ok((row1, row2))
        }
    }
}

impl DenseSystem {
    /// Matrix-vector product with the assembled operator.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let dim = 2 * self.n_x;
        assert_eq!(x.len(), dim);
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (row, out_row) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (col, &xv) in x.iter().enumerate() {
                acc += self.matrix[row * dim + col] * xv;
            }
            *out_row = acc;
        }
        out
    }

    /// Solve by partially pivoted Gaussian elimination. Returns the surface
    /// fields and the relative residual ||A x - b|| / ||b|| measured against
    /// the original system.
    pub fn solve(&self) -> Result<(SurfaceField, SurfaceField, f64), SolveError> {
        let n = self.n_x;
        let dim = 2 * n;
        let mut a = self.matrix.clone();
        let mut b = self.rhs.clone();
        let mut max_pivot = 0.0f64;
        let mut min_pivot = f64::INFINITY;

        for col in 0..dim {
            let mut pivot_row = col;
            let mut pivot_mag = a[col * dim + col].norm();
            for row in col + 1..dim {
                let mag = a[row * dim + col].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = row;
                }
            }
            max_pivot = max_pivot.max(pivot_mag);
            min_pivot = min_pivot.min(pivot_mag);
            if pivot_mag == 0.0 {
                return Err(SolveError::SingularSystem {
                    condition: f64::INFINITY,
                });
            }
            if pivot_row != col {
                for k in 0..dim {
                    a.swap(col * dim + k, pivot_row * dim + k);
                }
                b.swap(col, pivot_row);
            }
            let pivot = a[col * dim + col];
            for row in col + 1..dim {
                let factor = a[row * dim + col] / pivot;
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                a[row * dim + col] = Complex64::new(0.0, 0.0);
                for k in col + 1..dim {
                    let v = a[col * dim + k];
                    a[row * dim + k] -= factor * v;
                }
                let bv = b[col];
                b[row] -= factor * bv;
            }
        }
        let condition = max_pivot / min_pivot;
        if condition > CONDITION_LIMIT {
            return Err(SolveError::SingularSystem { condition });
        }

        // Back substitution.
        let mut x = vec![Complex64::new(0.0, 0.0); dim];
        for row in (0..dim).rev() {
            let mut acc = b[row];
            for col in row + 1..dim {
                acc -= a[row * dim + col] * x[col];
            }
            x[row] = acc / a[row * dim + row];
        }

        let residual_vec = self.apply(&x);
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for row in 0..dim {
            num += (residual_vec[row] - self.rhs[row]).norm_sqr();
            den += self.rhs[row].norm_sqr();
        }
        let residual = (num / den.max(f64::MIN_POSITIVE)).sqrt();

        let half = (n / 2) as i64;
        let mut u = SurfaceField::zeros(n);
        let mut w = SurfaceField::zeros(n);
        for idx in 0..n {
            let p = idx as i64 - half;
            u.set_coeff(p, x[idx]);
            w.set_coeff(p, x[n + idx]);
        }
        Ok((u, w, residual))
    }
}

/// Assemble and solve in one call.
pub fn solve_collocation(
    grid: &SpectralGrid,
    phys: &PhysicalConfig,
    sigma: &SigmaPair,
    envelope: &Envelope,
    delta: f64,
) -> Result<(SurfaceField, SurfaceField, f64), SolveError> {
    assemble(grid, phys, sigma, envelope, delta)?.solve()
}
