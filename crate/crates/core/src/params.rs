//! Problem configuration. Raw keyed input (with explicit unit suffixes:
//! um, deg, THz, eV, meV) is converted to SI exactly once at this boundary;
//! everything downstream is SI.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Deserialize;

use crate::conductivity::GrapheneParams;
use crate::constants::CONSTANTS;
use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    TE,
    TM,
}

impl Polarization {
    pub fn parse(tag: &str) -> Result<Self, ConfigError> {
        match tag {
            "TE" | "te" => Ok(Self::TE),
            "TM" | "tm" => Ok(Self::TM),
            _ => Err(ConfigError::BadPolarization {
                tag: tag.to_string(),
            }),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Self::TE => "TE",
            Self::TM => "TM",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverChoice {
    Hope,
    Collocation,
    Both,
}

impl SolverChoice {
    pub fn parse(tag: &str) -> Result<Self, ConfigError> {
        match tag {
            "hope" => Ok(Self::Hope),
            "collocation" => Ok(Self::Collocation),
            "both" => Ok(Self::Both),
            _ => Err(ConfigError::BadSolver {
                tag: tag.to_string(),
            }),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Self::Hope => "hope",
            Self::Collocation => "collocation",
            Self::Both => "both",
        }
    }
}

/// A fully validated single-point configuration with all derived wavenumbers,
/// SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig {
    pub eps_u: f64,
    pub eps_w: f64,
    /// Lateral period (m).
    pub d: f64,
    /// Incidence angle (rad), |theta| < pi/2.
    pub theta: f64,
    /// Ordinary frequency (Hz).
    pub f: f64,
    pub polarization: Polarization,
    /// Angular frequency omega = 2 pi f.
    pub omega: f64,
    /// Vacuum wavenumber omega / c0.
    pub k0: f64,
    /// Upper-medium wavenumber sqrt(eps_u) omega / c0.
    pub k_u: f64,
    /// Lower-medium wavenumber sqrt(eps_w) omega / c0.
    pub k_w: f64,
    /// Lateral wavenumber of the incident wave, k_u sin(theta).
    pub alpha: f64,
    /// Vertical wavenumber of the incident wave, k_u cos(theta).
    pub gamma_u0: f64,
    /// Interface weight: 1 (TE) or 1/eps_u (TM).
    pub tau_u: f64,
    /// Interface weight: 1 (TE) or 1/eps_w (TM).
    pub tau_w: f64,
}

impl PhysicalConfig {
    pub fn new(
        eps_u: f64,
        eps_w: f64,
        d: f64,
        theta: f64,
        f: f64,
        polarization: Polarization,
    ) -> Result<Self, ConfigError> {
        for (key, value) in [("eps_u", eps_u), ("eps_w", eps_w), ("d", d), ("f", f)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(ConfigError::NonPositive {
                    key: key.to_string(),
                    value,
                });
            }
        }
        if !(theta.abs() < PI / 2.0) {
            return Err(ConfigError::InvalidAngle {
                value_deg: theta * 180.0 / PI,
            });
        }
        let omega = 2.0 * PI * f;
        let k0 = omega / CONSTANTS.c0;
        let k_u = eps_u.sqrt() * omega / CONSTANTS.c0;
        let k_w = eps_w.sqrt() * omega / CONSTANTS.c0;
        let alpha = k_u * theta.sin();
        let gamma_u0 = k_u * theta.cos();
        let (tau_u, tau_w) = match polarization {
            Polarization::TE => (1.0, 1.0),
            Polarization::TM => (1.0 / eps_u, 1.0 / eps_w),
        };
        Ok(Self {
            eps_u,
            eps_w,
            d,
            theta,
            f,
            polarization,
            omega,
            k0,
            k_u,
            k_w,
            alpha,
            gamma_u0,
            tau_u,
            tau_w,
        })
    }

    /// (k0, k_u, k_w, alpha, gamma_u) in m^-1.
    pub fn wavenumbers(&self) -> (f64, f64, f64, f64, f64) {
        (self.k0, self.k_u, self.k_w, self.alpha, self.gamma_u0)
    }
}

fn default_x0() -> f64 {
    1.0
}
fn default_width_fraction() -> f64 {
    0.5
}
fn default_delta() -> f64 {
    1.0
}
fn default_n_x() -> usize {
    128
}
fn default_order() -> usize {
    16
}
fn default_pade() -> bool {
    true
}
fn default_solver() -> String {
    "hope".to_string()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ScalarOrVec {
    Scalar(f64),
    Vec(Vec<f64>),
}

impl ScalarOrVec {
    fn into_vec(self) -> Vec<f64> {
        match self {
            Self::Scalar(x) => vec![x],
            Self::Vec(v) => v,
        }
    }
}

/// Raw config file schema: flat keys with unit suffixes.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub eps_u: f64,
    pub eps_w: f64,
    pub d_um: ScalarOrVec,
    #[serde(default)]
    pub theta_deg: f64,
    pub pol: String,
    #[serde(rename = "f_THz")]
    pub f_thz: Option<f64>,
    #[serde(rename = "f_min_THz")]
    pub f_min_thz: Option<f64>,
    #[serde(rename = "f_max_THz")]
    pub f_max_thz: Option<f64>,
    pub n_f: Option<usize>,
    #[serde(rename = "E_F_eV")]
    pub e_f_ev: Option<f64>,
    #[serde(rename = "Gamma_meV")]
    pub gamma_mev: Option<f64>,
    #[serde(rename = "vF_m_per_s")]
    pub v_f_m_per_s: Option<f64>,
    pub tau_s: Option<f64>,
    #[serde(default)]
    pub nonlocal: bool,
    #[serde(rename = "X0", default = "default_x0")]
    pub x0: f64,
    #[serde(default = "default_width_fraction")]
    pub ribbon_width_fraction: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(rename = "N_x", default = "default_n_x")]
    pub n_x: usize,
    #[serde(rename = "L", default = "default_order")]
    pub order: usize,
    #[serde(default = "default_pade")]
    pub pade: bool,
    #[serde(default = "default_solver")]
    pub solver: String,
}

/// Frequency specification, retained so a resolved config can be emitted back
/// to keyed text without loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FreqSpec {
    /// Single frequency (Hz).
    Single(f64),
    /// Uniform grid from f_min to f_max (Hz) with n_f points.
    Sweep { f_min: f64, f_max: f64, n_f: usize },
}

impl FreqSpec {
    pub fn grid(&self) -> Vec<f64> {
        match *self {
            Self::Single(f) => vec![f],
            Self::Sweep { f_min, f_max, n_f } => linspace(f_min, f_max, n_f),
        }
    }
}

/// Uniform grid of n points from a to b inclusive (n >= 2).
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let mut v: Vec<f64> = (0..n)
        .map(|i| a + (b - a) * (i as f64) / ((n - 1) as f64))
        .collect();
    v[n - 1] = b;
    v
}

/// Fully resolved run configuration (SI units), covering the physical setup,
/// the graphene model, the envelope, and the numerical method choices.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub eps_u: f64,
    pub eps_w: f64,
    /// Periods to sweep (m).
    pub d_list: Vec<f64>,
    /// Incidence angle (rad).
    pub theta: f64,
    pub polarization: Polarization,
    pub freq: FreqSpec,
    /// Graphene parameters; `None` models a bare dielectric interface.
    pub graphene: Option<GrapheneParams>,
    pub x0: f64,
    pub width_fraction: f64,
    pub delta: f64,
    pub n_x: usize,
    /// Maximum perturbation order L.
    pub order: usize,
    /// Sum the series with Pade approximants (vs. plain Taylor).
    pub pade: bool,
    pub solver: SolverChoice,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        Self::resolve(raw)
    }

    pub fn resolve(raw: RawConfig) -> Result<Self, ConfigError> {
        for (key, value) in [("eps_u", raw.eps_u), ("eps_w", raw.eps_w)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(ConfigError::NonPositive {
                    key: key.to_string(),
                    value,
                });
            }
        }
        let d_um = raw.d_um.into_vec();
        if d_um.is_empty() {
            return Err(ConfigError::BadValue {
                key: "d_um",
                reason: "must list at least one period".to_string(),
            });
        }
        for &d in &d_um {
            if !(d > 0.0) || !d.is_finite() {
                return Err(ConfigError::NonPositive {
                    key: "d_um".to_string(),
                    value: d,
                });
            }
        }
        if !(raw.theta_deg.abs() < 90.0) {
            return Err(ConfigError::InvalidAngle {
                value_deg: raw.theta_deg,
            });
        }
        let polarization = Polarization::parse(&raw.pol)?;
        let solver = SolverChoice::parse(&raw.solver)?;

        let sweep_keys =
            raw.f_min_thz.is_some() || raw.f_max_thz.is_some() || raw.n_f.is_some();
        let freq = match (raw.f_thz, sweep_keys) {
            (Some(_), true) => {
                return Err(ConfigError::Conflicting {
                    reason: "give either f_THz or the sweep triple f_min_THz/f_max_THz/n_f, not both",
                })
            }
            (Some(f_thz), false) => {
                if !(f_thz > 0.0) || !f_thz.is_finite() {
                    return Err(ConfigError::NonPositive {
                        key: "f_THz".to_string(),
                        value: f_thz,
                    });
                }
                FreqSpec::Single(f_thz * 1e12)
            }
            (None, _) => {
                let (Some(f_min), Some(f_max), Some(n_f)) =
                    (raw.f_min_thz, raw.f_max_thz, raw.n_f)
                else {
                    return Err(ConfigError::Missing {
                        key: "f_THz",
                        reason: "give f_THz, or all of f_min_THz, f_max_THz, and n_f",
                    });
                };
                if !(f_min > 0.0) || !f_min.is_finite() {
                    return Err(ConfigError::NonPositive {
                        key: "f_min_THz".to_string(),
                        value: f_min,
                    });
                }
                if !(f_max > f_min) {
                    return Err(ConfigError::BadValue {
                        key: "f_max_THz",
                        reason: format!("must exceed f_min_THz = {f_min}"),
                    });
                }
                if n_f < 2 {
                    return Err(ConfigError::BadValue {
                        key: "n_f",
                        reason: "a sweep needs at least 2 points (use f_THz for a single one)"
                            .to_string(),
                    });
                }
                FreqSpec::Sweep {
                    f_min: f_min * 1e12,
                    f_max: f_max * 1e12,
                    n_f,
                }
            }
        };

        let graphene = match (raw.e_f_ev, raw.gamma_mev) {
            (None, None) => {
                if raw.nonlocal {
                    return Err(ConfigError::Conflicting {
                        reason: "nonlocal = true requires graphene parameters (E_F_eV, Gamma_meV)",
                    });
                }
                if raw.v_f_m_per_s.is_some() || raw.tau_s.is_some() {
                    return Err(ConfigError::Conflicting {
                        reason: "vF_m_per_s/tau_s given without E_F_eV and Gamma_meV",
                    });
                }
                None
            }
            (Some(e_f_ev), Some(gamma_mev)) => {
                if !(e_f_ev > 0.0) {
                    return Err(ConfigError::NonPositive {
                        key: "E_F_eV".to_string(),
                        value: e_f_ev,
                    });
                }
                if !(gamma_mev > 0.0) {
                    return Err(ConfigError::NonPositive {
                        key: "Gamma_meV".to_string(),
                        value: gamma_mev,
                    });
                }
                if raw.nonlocal {
                    if raw.v_f_m_per_s.is_none() {
                        return Err(ConfigError::Missing {
                            key: "vF_m_per_s",
                            reason: "required when nonlocal = true",
                        });
                    }
                    if raw.tau_s.is_none() {
                        return Err(ConfigError::Missing {
                            key: "tau_s",
                            reason: "required when nonlocal = true",
                        });
                    }
                }
                // Inert placeholders for local-only runs where they are unused.
                let v_f = raw.v_f_m_per_s.unwrap_or(1e6);
                let tau = raw.tau_s.unwrap_or(9e-14);
                for (key, value) in [("vF_m_per_s", v_f), ("tau_s", tau)] {
                    if !(value > 0.0) || !value.is_finite() {
                        return Err(ConfigError::NonPositive {
                            key: key.to_string(),
                            value,
                        });
                    }
                }
                Some(GrapheneParams::new(
                    CONSTANTS.ev_to_joule(e_f_ev),
                    CONSTANTS.ev_to_joule(gamma_mev * 1e-3),
                    v_f,
                    tau,
                    raw.nonlocal,
                )?)
            }
            (Some(_), None) => {
                return Err(ConfigError::Missing {
                    key: "Gamma_meV",
                    reason: "E_F_eV was given; graphene needs both",
                })
            }
            (None, Some(_)) => {
                return Err(ConfigError::Missing {
                    key: "E_F_eV",
                    reason: "Gamma_meV was given; graphene needs both",
                })
            }
        };

        if raw.x0 == 0.0 || !raw.x0.is_finite() {
            return Err(ConfigError::ZeroBaseline);
        }
        if !(raw.ribbon_width_fraction > 0.0 && raw.ribbon_width_fraction <= 1.0) {
            return Err(ConfigError::BadWidthFraction {
                value: raw.ribbon_width_fraction,
            });
        }
        if !raw.delta.is_finite() {
            return Err(ConfigError::BadValue {
                key: "delta",
                reason: "must be finite".to_string(),
            });
        }
        if !raw.n_x.is_power_of_two() || raw.n_x < crate::spectral::MIN_GRID {
            return Err(ConfigError::BadGridSize {
                got: raw.n_x,
                minimum: crate::spectral::MIN_GRID,
            });
        }

        Ok(Self {
            eps_u: raw.eps_u,
            eps_w: raw.eps_w,
            d_list: d_um.iter().map(|&d| d * 1e-6).collect(),
            theta: raw.theta_deg * PI / 180.0,
            polarization,
            freq,
            graphene,
            x0: raw.x0,
            width_fraction: raw.ribbon_width_fraction,
            delta: raw.delta,
            n_x: raw.n_x,
            order: raw.order,
            pade: raw.pade,
            solver,
        })
    }

    /// The physical configuration at one sweep point.
    pub fn physical(&self, d: f64, f: f64) -> Result<PhysicalConfig, ConfigError> {
        PhysicalConfig::new(self.eps_u, self.eps_w, d, self.theta, f, self.polarization)
    }

    pub fn f_grid(&self) -> Vec<f64> {
        self.freq.grid()
    }

    /// Emit the resolved configuration back to keyed text. Floats carry 17
    /// significant digits, so re-parsing reproduces the SI values exactly
    /// (up to the one boundary unit conversion each way).
    pub fn to_toml_string(&self) -> String {
        let mut s = String::new();
        let fl = |x: f64| format!("{:.16e}", x);
        let _ = writeln!(s, "eps_u = {}", fl(self.eps_u));
        let _ = writeln!(s, "eps_w = {}", fl(self.eps_w));
        let d_um: Vec<String> = self.d_list.iter().map(|&d| fl(d / 1e-6)).collect();
        let _ = writeln!(s, "d_um = [{}]", d_um.join(", "));
        let _ = writeln!(s, "theta_deg = {}", fl(self.theta * 180.0 / PI));
        let _ = writeln!(s, "pol = \"{}\"", self.polarization.tag());
        match self.freq {
            FreqSpec::Single(f) => {
                let _ = writeln!(s, "f_THz = {}", fl(f / 1e12));
            }
            FreqSpec::Sweep { f_min, f_max, n_f } => {
                let _ = writeln!(s, "f_min_THz = {}", fl(f_min / 1e12));
                let _ = writeln!(s, "f_max_THz = {}", fl(f_max / 1e12));
                let _ = writeln!(s, "n_f = {}", n_f);
            }
        }
        if let Some(g) = &self.graphene {
            let _ = writeln!(s, "E_F_eV = {}", fl(g.e_f / CONSTANTS.e));
            let _ = writeln!(s, "Gamma_meV = {}", fl(g.gamma / CONSTANTS.e / 1e-3));
            let _ = writeln!(s, "vF_m_per_s = {}", fl(g.v_f));
            let _ = writeln!(s, "tau_s = {}", fl(g.tau));
            let _ = writeln!(s, "nonlocal = {}", g.nonlocal);
        }
        let _ = writeln!(s, "X0 = {}", fl(self.x0));
        let _ = writeln!(s, "ribbon_width_fraction = {}", fl(self.width_fraction));
        let _ = writeln!(s, "delta = {}", fl(self.delta));
        let _ = writeln!(s, "N_x = {}", self.n_x);
        let _ = writeln!(s, "L = {}", self.order);
        let _ = writeln!(s, "pade = {}", self.pade);
        let _ = writeln!(s, "solver = \"{}\"", self.solver.tag());
        s
    }
}
