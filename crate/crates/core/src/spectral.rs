//! Quasiperiodic spectral grid, surface fields, and the Fourier-side
//! operators: flat-interface Dirichlet-Neumann maps, the conductivity
//! operators, and pointwise envelope multiplication.
//!
//! Fields are stored as Fourier coefficients in FFT bin order; the public
//! accessors use the symmetric index p in [-N_x/2, N_x/2 - 1], with
//! bin = p mod N_x. The transform convention is
//!
//! ```text
//! u(x_j)  = sum_p  U_p exp(i (2 pi / d) p x_j)        (synthesis)
//! U_p     = (1/N) sum_j u(x_j) exp(-i (2 pi / d) p x_j) (analysis)
//! ```
//!
//! i.e. the common `exp(i alpha x)` quasiperiodic phase is factored out and
//! fields here are the periodic envelopes.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::conductivity::{sample_envelope, Envelope, SigmaPair};
use crate::error::{ConfigError, SolveError};
use crate::params::PhysicalConfig;

/// Smallest admissible transform size.
pub const MIN_GRID: usize = 8;

/// A periodic surface field, stored as Fourier coefficients in FFT bin order.
#[derive(Clone, PartialEq)]
pub struct SurfaceField {
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for SurfaceField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceField")
            .field("len", &self.coeffs.len())
            .field("l2", &self.l2_norm())
            .finish()
    }
}

impl SurfaceField {
    pub fn zeros(n: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Wrap coefficients already in FFT bin order.
    pub fn from_bins(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients in FFT bin order.
    pub fn bins(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn bins_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient at symmetric index p (interpreted modulo N_x).
    pub fn coeff(&self, p: i64) -> Complex64 {
        let n = self.coeffs.len() as i64;
        self.coeffs[p.rem_euclid(n) as usize]
    }

    pub fn set_coeff(&mut self, p: i64, value: Complex64) {
        let n = self.coeffs.len() as i64;
        self.coeffs[p.rem_euclid(n) as usize] = value;
    }

    /// Discrete L2 norm, sqrt(sum_p |U_p|^2).
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// self + factor * other.
    pub fn add_scaled(&self, other: &Self, factor: Complex64) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + factor * b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, Complex64::new(-1.0, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }
}

/// The quasiperiodic mode grid for one physical configuration: lateral
/// wavenumbers alpha_p, vertical wavenumbers gamma_{u,p}, gamma_{w,p} with the
/// outgoing branch, and the sets of propagating orders.
#[derive(Clone)]
pub struct SpectralGrid {
    pub n_x: usize,
    pub d: f64,
    pub k0: f64,
    pub k_u: f64,
    pub k_w: f64,
    pub alpha: f64,
    /// alpha_p = alpha + (2 pi / d) p, FFT bin order.
    pub alpha_p: Vec<f64>,
    /// gamma_{u,p}: real >= 0 for propagating modes, +i sqrt(alpha_p^2 - k^2)
    /// for evanescent ones. FFT bin order.
    pub gamma_u: Vec<Complex64>,
    pub gamma_w: Vec<Complex64>,
    /// Propagating orders (symmetric index), ascending.
    pub prop_u: Vec<i64>,
    pub prop_w: Vec<i64>,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n_x", &self.n_x)
            .field("d", &self.d)
            .field("prop_u", &self.prop_u)
            .field("prop_w", &self.prop_w)
            .finish()
    }
}

fn gamma_branch(k: f64, alpha_p: f64) -> Complex64 {
    let disc = k * k - alpha_p * alpha_p;
    if disc >= 0.0 {
        Complex64::new(disc.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-disc).sqrt())
    }
}

/// Build the mode grid for `config` with `n_x` Fourier modes.
pub fn build_grid(config: &PhysicalConfig, n_x: usize) -> Result<SpectralGrid, ConfigError> {
    if !n_x.is_power_of_two() || n_x < MIN_GRID {
        return Err(ConfigError::BadGridSize {
            got: n_x,
            minimum: MIN_GRID,
        });
    }
    let mut planner = FftPlanner::new();
    let fft_fwd = planner.plan_fft_forward(n_x);
    let fft_inv = planner.plan_fft_inverse(n_x);

    let half = (n_x / 2) as i64;
    let mut alpha_p = vec![0.0; n_x];
    let mut gamma_u = vec![Complex64::new(0.0, 0.0); n_x];
    let mut gamma_w = vec![Complex64::new(0.0, 0.0); n_x];
    for bin in 0..n_x {
        let p = if (bin as i64) < half {
            bin as i64
        } else {
            bin as i64 - n_x as i64
        };
        let ap = config.alpha + (2.0 * PI / config.d) * (p as f64);
        alpha_p[bin] = ap;
        gamma_u[bin] = gamma_branch(config.k_u, ap);
        gamma_w[bin] = gamma_branch(config.k_w, ap);
    }
    let mut prop_u = Vec::new();
    let mut prop_w = Vec::new();
    for p in -half..half {
        let bin = p.rem_euclid(n_x as i64) as usize;
        let ap2 = alpha_p[bin] * alpha_p[bin];
        if ap2 <= config.k_u * config.k_u {
            prop_u.push(p);
        }
        if ap2 <= config.k_w * config.k_w {
            prop_w.push(p);
        }
    }
    Ok(SpectralGrid {
        n_x,
        d: config.d,
        k0: config.k0,
        k_u: config.k_u,
        k_w: config.k_w,
        alpha: config.alpha,
        alpha_p,
        gamma_u,
        gamma_w,
        prop_u,
        prop_w,
        fft_fwd,
        fft_inv,
    })
}

impl SpectralGrid {
    pub fn bin_of(&self, p: i64) -> usize {
        p.rem_euclid(self.n_x as i64) as usize
    }

    /// Symmetric index of an FFT bin: bins 0..N/2 map to p = bin, the rest to
    /// p = bin - N.
    pub fn index_of_bin(&self, bin: usize) -> i64 {
        if bin < self.n_x / 2 {
            bin as i64
        } else {
            bin as i64 - self.n_x as i64
        }
    }

    fn check_len(&self, field: &SurfaceField) -> Result<(), SolveError> {
        if field.len() != self.n_x {
            return Err(SolveError::LengthMismatch {
                got: field.len(),
                expected: self.n_x,
            });
        }
        Ok(())
    }

    /// Synthesize physical samples u(x_j) from coefficients.
    pub fn to_physical(&self, field: &SurfaceField) -> Result<Vec<Complex64>, SolveError> {
        self.check_len(field)?;
        let mut buf = field.bins().to_vec();
        self.fft_inv.process(&mut buf);
        Ok(buf)
    }

    /// Analyze physical samples into coefficients.
    pub fn from_physical(&self, samples: &[Complex64]) -> Result<SurfaceField, SolveError> {
        if samples.len() != self.n_x {
            return Err(SolveError::LengthMismatch {
                got: samples.len(),
                expected: self.n_x,
            });
        }
        let mut buf = samples.to_vec();
        self.fft_fwd.process(&mut buf);
        let scale = 1.0 / self.n_x as f64;
        for c in &mut buf {
            *c *= scale;
        }
        Ok(SurfaceField::from_bins(buf))
    }

    fn multiplier_map(
        &self,
        field: &SurfaceField,
        f: impl Fn(usize) -> Complex64,
    ) -> Result<SurfaceField, SolveError> {
        self.check_len(field)?;
        Ok(SurfaceField::from_bins(
            field
                .bins()
                .iter()
                .enumerate()
                .map(|(bin, c)| c * f(bin))
                .collect(),
        ))
    }

    /// Upper flat-interface Dirichlet-Neumann map: U_p -> -i gamma_{u,p} U_p.
    pub fn dno_upper(&self, field: &SurfaceField) -> Result<SurfaceField, SolveError> {
        let i = Complex64::i();
        self.multiplier_map(field, |bin| -i * self.gamma_u[bin])
    }

    /// Lower flat-interface Dirichlet-Neumann map: W_p -> -i gamma_{w,p} W_p.
    pub fn dno_lower(&self, field: &SurfaceField) -> Result<SurfaceField, SolveError> {
        let i = Complex64::i();
        self.multiplier_map(field, |bin| -i * self.gamma_w[bin])
    }

    /// Fourier symbol of the conductivity operator at a bin.
    pub fn sigma_symbol(&self, sigma: &SigmaPair, bin: usize) -> Complex64 {
        sigma.symbol(self.alpha_p[bin])
    }

    /// Conductivity operator entering the TM interface condition:
    /// coefficient-wise (sigma_loc + sigma_nloc alpha_p^2) / (i k0).
    pub fn apply_a(
        &self,
        sigma: &SigmaPair,
        field: &SurfaceField,
    ) -> Result<SurfaceField, SolveError> {
        let ik0 = Complex64::i() * self.k0;
        self.multiplier_map(field, |bin| self.sigma_symbol(sigma, bin) / ik0)
    }

    /// Conductivity operator entering the TE interface condition:
    /// coefficient-wise (i k0)(sigma_loc + sigma_nloc alpha_p^2).
    pub fn apply_b(
        &self,
        sigma: &SigmaPair,
        field: &SurfaceField,
    ) -> Result<SurfaceField, SolveError> {
        let ik0 = Complex64::i() * self.k0;
        self.multiplier_map(field, |bin| ik0 * self.sigma_symbol(sigma, bin))
    }

    /// Pointwise product with a real sample array on the physical side
    /// (equivalently, cyclic convolution of the coefficients).
    pub fn pointwise_multiply(
        &self,
        envelope_samples: &[f64],
        field: &SurfaceField,
    ) -> Result<SurfaceField, SolveError> {
        if envelope_samples.len() != self.n_x {
            return Err(SolveError::LengthMismatch {
                got: envelope_samples.len(),
                expected: self.n_x,
            });
        }
        let mut phys = self.to_physical(field)?;
        for (v, &e) in phys.iter_mut().zip(envelope_samples) {
            *v *= e;
        }
        self.from_physical(&phys)
    }

    /// Pointwise product evaluated on a 2x zero-padded grid, which removes
    /// aliasing of the product back into the retained band. Off by default in
    /// the solvers; exposed for experiments.
    pub fn pointwise_multiply_dealiased(
        &self,
        envelope: &Envelope,
        field: &SurfaceField,
    ) -> Result<SurfaceField, SolveError> {
        self.check_len(field)?;
        let n = self.n_x;
        let n2 = 2 * n;
        let env2 = sample_envelope(envelope.d, envelope.x0, envelope.width_fraction, n2)
            .expect("padded envelope sampling cannot fail for a valid envelope");
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n2);
        let inv = planner.plan_fft_inverse(n2);

        // Zero-pad the spectrum: low bins stay, high bins move to the top.
        let mut buf = vec![Complex64::new(0.0, 0.0); n2];
        buf[..n / 2].copy_from_slice(&field.bins()[..n / 2]);
        buf[n2 - n / 2..].copy_from_slice(&field.bins()[n / 2..]);
        inv.process(&mut buf);
        for (v, &e) in buf.iter_mut().zip(&env2.samples_x1) {
            *v *= e;
        }
        fwd.process(&mut buf);
        let scale = 1.0 / n2 as f64;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[..n / 2]
            .iter_mut()
            .zip(&buf[..n / 2])
            .for_each(|(o, &b)| *o = b * scale);
        out[n / 2..]
            .iter_mut()
            .zip(&buf[n2 - n / 2..])
            .for_each(|(o, &b)| *o = b * scale);
        Ok(SurfaceField::from_bins(out))
    }
}
