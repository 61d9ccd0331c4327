//! Graphene surface conductivity (local Drude term plus an optional nonlocal
//! hydrodynamic correction) and the periodic ribbon envelope.
//!
//! All conductivities are kept dimensionless by normalizing with `eps0 * c0`;
//! the nonlocal coefficient carries units of m^2 because it multiplies
//! `-d^2/dx^2`. The time convention is `exp(-i omega t)`, which makes both the
//! real and imaginary parts of the local conductivity strictly positive.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::constants::CONSTANTS;
use crate::error::ConfigError;

/// Graphene material parameters, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrapheneParams {
    /// Fermi level E_F (J).
    pub e_f: f64,
    /// Relaxation energy Gamma (J); the collision rate is Gamma / hbar.
    pub gamma: f64,
    /// Fermi velocity (m/s). Enters only the nonlocal correction.
    pub v_f: f64,
    /// Carrier lifetime tau (s). Enters only the nonlocal correction.
    pub tau: f64,
    /// Whether the nonlocal correction is applied.
    pub nonlocal: bool,
}

impl GrapheneParams {
    pub fn new(
        e_f: f64,
        gamma: f64,
        v_f: f64,
        tau: f64,
        nonlocal: bool,
    ) -> Result<Self, ConfigError> {
        for (key, value) in [("E_F", e_f), ("Gamma", gamma), ("v_F", v_f), ("tau", tau)] {
            if !(value > 0.0) {
                return Err(ConfigError::NonPositive {
                    key: key.to_string(),
                    value,
                });
            }
        }
        Ok(Self {
            e_f,
            gamma,
            v_f,
            tau,
            nonlocal,
        })
    }

    /// Collision rate gamma-tilde = Gamma / hbar (rad/s).
    pub fn collision_rate(&self) -> f64 {
        self.gamma / CONSTANTS.hbar
    }

    /// Copy of the parameters with the nonlocal flag replaced.
    pub fn with_nonlocal(&self, nonlocal: bool) -> Self {
        Self { nonlocal, ..*self }
    }
}

/// The pair (sigma_loc, sigma_nloc) entering the surface current
/// `sigma_loc - sigma_nloc d^2/dx^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaPair {
    /// Local (Drude) conductivity, dimensionless.
    pub sigma_loc: Complex64,
    /// Nonlocal coefficient, m^2 (zero when the local model is selected).
    pub sigma_nloc: Complex64,
}

impl SigmaPair {
    /// A conductivity-free interface (bare dielectric junction).
    pub const ZERO: SigmaPair = SigmaPair {
        sigma_loc: Complex64::new(0.0, 0.0),
        sigma_nloc: Complex64::new(0.0, 0.0),
    };

    /// Fourier symbol Sigma_p = sigma_loc + sigma_nloc alpha_p^2 of the
    /// conductivity operator (the -d^2/dx^2 acts as +alpha_p^2).
    pub fn symbol(&self, alpha_p: f64) -> Complex64 {
        self.sigma_loc + self.sigma_nloc * (alpha_p * alpha_p)
    }

    pub fn is_zero(&self) -> bool {
        self.sigma_loc == Complex64::new(0.0, 0.0)
            && self.sigma_nloc == Complex64::new(0.0, 0.0)
    }
}

/// Dimensionless Drude conductivity at ordinary frequency `f` (Hz).
///
/// Two superficially different closed forms of the graphene Drude term
/// circulate; they differ by a factor of 1/h and only one is dimensionally
/// consistent. We use
///
/// ```text
/// sigma_loc = (sigma_0 / (eps0 c0)) * (4 E_F / pi) / (Gamma - i hbar omega)
/// ```
///
/// which is algebraically `e^2 E_F / (pi hbar^2 eps0 c0 (gamma_tilde - i omega))`,
/// the standard sheet conductivity normalized by `eps0 c0`.
pub fn drude(params: &GrapheneParams, f: f64) -> Result<Complex64, ConfigError> {
    if !(f > 0.0) {
        return Err(ConfigError::NonPositive {
            key: "f".to_string(),
            value: f,
        });
    }
    let c = CONSTANTS;
    let omega = 2.0 * PI * f;
    let prefactor = (c.sigma0() / (c.eps0 * c.c0)) * (4.0 * params.e_f / PI);
    let denom = Complex64::new(params.gamma, -c.hbar * omega);
    Ok(prefactor / denom)
}

/// Nonlocal correction factor Q(f) (m^2), so that sigma_nloc = sigma_loc * Q.
///
/// Evaluated in the explicitly rationalized form
///
/// ```text
/// Re Q =  v_F^2 tau^2 (3 f^2 tau^2 + 1) / (4 (f^2 tau^2 + 1)^2)   > 0
/// Im Q = -v_F^2 tau   (2 f^2 tau^2 + 1) / (2 f (f^2 tau^2 + 1)^2) < 0
/// ```
///
/// which is the rationalization of `v_F^2 (3f + 2i/tau) / (4 f (f + i/tau)^2)`
/// and makes the sign structure explicit.
pub fn bgk_q(params: &GrapheneParams, f: f64) -> Result<Complex64, ConfigError> {
    if !(f > 0.0) {
        return Err(ConfigError::NonPositive {
            key: "f".to_string(),
            value: f,
        });
    }
    if !(params.tau > 0.0) {
        return Err(ConfigError::NonPositive {
            key: "tau".to_string(),
            value: params.tau,
        });
    }
    let v2 = params.v_f * params.v_f;
    let tau = params.tau;
    let ft2 = (f * tau) * (f * tau);
    let denom = (ft2 + 1.0) * (ft2 + 1.0);
    let re = v2 * tau * tau * (3.0 * ft2 + 1.0) / (4.0 * denom);
    let im = -v2 * tau * (2.0 * ft2 + 1.0) / (2.0 * f * denom);
    Ok(Complex64::new(re, im))
}

/// Evaluate the conductivity pair at frequency `f`. With the nonlocal flag off
/// the nonlocal coefficient is exactly zero.
pub fn sigma_pair(params: &GrapheneParams, f: f64) -> Result<SigmaPair, ConfigError> {
    let sigma_loc = drude(params, f)?;
    let sigma_nloc = if params.nonlocal {
        sigma_loc * bgk_q(params, f)?
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(SigmaPair {
        sigma_loc,
        sigma_nloc,
    })
}

/// Ribbon envelope samples: X(x; delta) = X0 + delta * X1(x), with X1 a
/// half-ellipse bump of width `w = width_fraction * d` centered at `x = d/2`
/// on top of the constant `-X0`. At delta = 1 the combination X0 + X1 is the
/// ribbon profile itself: zero off the ribbon, elliptical on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    /// Baseline X0 (dimensionless, nonzero).
    pub x0: f64,
    /// Ribbon width as a fraction of the period.
    pub width_fraction: f64,
    /// Lateral period d (m) the samples were taken on.
    pub d: f64,
    /// X1 evaluated at the gridpoints x_j = (d/N_x) j.
    pub samples_x1: Vec<f64>,
}

impl Envelope {
    /// An unperturbed envelope (X1 identically zero), useful for tests and
    /// for the constant-sheet limit.
    pub fn flat(d: f64, x0: f64, n_x: usize) -> Self {
        Self {
            x0,
            width_fraction: 0.5,
            d,
            samples_x1: vec![0.0; n_x],
        }
    }

    /// Samples of the full envelope X0 + delta * X1 at the gridpoints.
    pub fn full_samples(&self, delta: f64) -> Vec<f64> {
        self.samples_x1
            .iter()
            .map(|&x1| self.x0 + delta * x1)
            .collect()
    }
}

pub const MIN_ENVELOPE_GRID: usize = 2;

/// Sample the ribbon envelope X1 on the uniform grid x_j = (d/N_x) j.
pub fn sample_envelope(
    d: f64,
    x0: f64,
    width_fraction: f64,
    n_x: usize,
) -> Result<Envelope, ConfigError> {
    if !(d > 0.0) {
        return Err(ConfigError::NonPositive {
            key: "d".to_string(),
            value: d,
        });
    }
    if x0 == 0.0 || !x0.is_finite() {
        return Err(ConfigError::ZeroBaseline);
    }
    if !(width_fraction > 0.0 && width_fraction <= 1.0) {
        return Err(ConfigError::BadWidthFraction {
            value: width_fraction,
        });
    }
    if !n_x.is_power_of_two() || n_x < MIN_ENVELOPE_GRID {
        return Err(ConfigError::BadGridSize {
            got: n_x,
            minimum: MIN_ENVELOPE_GRID,
        });
    }
    let w = width_fraction * d;
    let samples_x1 = (0..n_x)
        .map(|j| {
            let x = d * (j as f64) / (n_x as f64);
            // t = 2 (x - d/2) / w; the ribbon is |t| < 1.
            let t = 2.0 * (x - d / 2.0) / w;
            if t.abs() < 1.0 {
                -x0 + (1.0 - t * t).sqrt()
            } else {
                -x0
            }
        })
        .collect();
    Ok(Envelope {
        x0,
        width_fraction,
        d,
        samples_x1,
    })
}
