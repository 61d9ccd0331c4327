//! Physical constants, compiled in (CODATA 2018; `e`, `h`, and `c0` are exact
//! by definition in the 2019 SI).

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy)]
pub struct Constants {
    /// Elementary charge (C).
    pub e: f64,
    /// Planck constant (J s).
    pub h: f64,
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Vacuum permittivity (C^2 J^-1 m^-1).
    pub eps0: f64,
    /// Vacuum speed of light (m s^-1).
    pub c0: f64,
}

pub const CONSTANTS: Constants = Constants {
    e: 1.602_176_634e-19,
    h: 6.626_070_15e-34,
    hbar: 6.626_070_15e-34 / (2.0 * PI),
    eps0: 8.854_187_812_8e-12,
    c0: 299_792_458.0,
};

impl Constants {
    /// Universal sheet conductance of graphene, sigma_0 = pi e^2 / (2h) (S).
    pub fn sigma0(&self) -> f64 {
        PI * self.e * self.e / (2.0 * self.h)
    }

    /// Convert an energy in eV to J.
    pub fn ev_to_joule(&self, ev: f64) -> f64 {
        ev * self.e
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hbar_is_h_over_two_pi() {
        let c = CONSTANTS;
        assert!((c.hbar - c.h / (2.0 * PI)).abs() <= 1e-15 * c.hbar);
    }

    #[test]
    fn all_positive() {
        let c = CONSTANTS;
        for v in [c.e, c.h, c.hbar, c.eps0, c.c0] {
            assert!(v > 0.0);
        }
    }

    #[test]
    fn sheet_conductance_scale() {
        // sigma_0 / (eps0 c0), the dimensionless conductivity scale, evaluated
        // independently with 40-digit arithmetic.
        let c = CONSTANTS;
        let scale = c.sigma0() / (c.eps0 * c.c0);
        assert!((scale - 0.022925309222298473).abs() < 1e-15);
    }
}
