//! Spectral solvers for plane-wave scattering by a periodic array of graphene
//! ribbons at the flat interface between two dielectric half-spaces.
//!
//! The library computes reflectance, transmittance, and absorbance for TE and
//! TM illumination with a local (Drude) or nonlocal (BGK-corrected) sheet
//! conductivity. Two solvers share every convention:
//!
//! * [`hope`]: a high-order perturbation expansion in the ribbon envelope,
//!   summed by Taylor or Pade approximants, with per-order cost of one FFT
//!   pair;
//! * [`collocation`]: direct dense solution of the same truncated system,
//!   used as the cross-check.
//!
//! The crate is organized bottom-up: [`constants`] and [`params`] fix units
//! and derived wavenumbers, [`conductivity`] builds the sheet model and the
//! ribbon envelope, [`spectral`] owns the quasiperiodic mode grid and the
//! Fourier-side operators, [`solver`] the per-mode order-zero solves,
//! [`pade`] the series summation, and [`observables`] the efficiency and
//! energy bookkeeping.

pub mod collocation;
pub mod conductivity;
pub mod constants;
pub mod error;
pub mod hope;
pub mod observables;
pub mod pade;
pub mod params;
pub mod solver;
pub mod spectral;

pub use error::{ConfigError, SolveError};
pub use params::{PhysicalConfig, Polarization, RunConfig, SolverChoice};
