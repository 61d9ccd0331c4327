//! Sweep driver shared by the `hope` binary and its tests: per-point solves,
//! parallel execution with deterministic row order, CSV emission, and the
//! convergence diagnostic table.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use rayon::prelude::*;

use hope_core::conductivity::{sample_envelope, sigma_pair, SigmaPair};
use hope_core::hope::{hope_recursion, pade_sum, taylor_sum};
use hope_core::observables::efficiencies;
use hope_core::pade::default_split;
use hope_core::solver::determinant_profile;
use hope_core::spectral::{build_grid, SurfaceField};
use hope_core::{RunConfig, SolverChoice};

/// Scalar observables for one sweep point. `a_local`/`a_nonlocal` are filled
/// when the configuration requests the nonlocal model, in which case the
/// primary columns (r, t, a) are the nonlocal ones and `a_local` is the
/// same point re-solved with the local model for comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct PointValues {
    pub r: f64,
    pub t: f64,
    pub a: f64,
    pub a_local: Option<f64>,
    pub a_nonlocal: Option<f64>,
}

/// Outcome of one (period, frequency, solver) task.
#[derive(Debug, Clone)]
pub struct PointResult {
    /// Period (m).
    pub d: f64,
    /// Frequency (Hz).
    pub f: f64,
    pub solver: &'static str,
    pub status: Result<PointValues, String>,
    /// min_p |Delta_p| of the primary model, NaN if never computed.
    pub min_abs_det: f64,
    /// Pade fallback count of the primary-model summation (0 for Taylor and
    /// for the collocation solver).
    pub pade_fallbacks: usize,
}

fn solve_fields(
    cfg: &RunConfig,
    grid: &hope_core::spectral::SpectralGrid,
    phys: &hope_core::PhysicalConfig,
    sigma: &SigmaPair,
    envelope: &hope_core::conductivity::Envelope,
    solver: SolverChoice,
) -> Result<(SurfaceField, SurfaceField, usize), String> {
    match solver {
        SolverChoice::Hope => {
            let series = hope_recursion(grid, phys, sigma, envelope, cfg.order)
                .map_err(|e| e.to_string())?;
            if cfg.pade {
                let (m, n) = default_split(cfg.order);
                let ((u, w), fallbacks) = pade_sum(&series, cfg.delta, m, n);
                Ok((u, w, fallbacks))
            } else {
                let (u, w) = taylor_sum(&series, cfg.delta);
                Ok((u, w, 0))
            }
        }
        SolverChoice::Collocation => {
            let (u, w, _residual) =
                hope_core::collocation::solve_collocation(grid, phys, sigma, envelope, cfg.delta)
                    .map_err(|e| e.to_string())?;
            Ok((u, w, 0))
        }
        SolverChoice::Both => unreachable!("sweep points are expanded to single solvers"),
    }
}

/// Solve one sweep point with one solver. Never panics on solver failure; the
/// error lands in `status`.
pub fn solve_point(cfg: &RunConfig, d: f64, f: f64, solver: SolverChoice) -> PointResult {
    let mut min_abs_det = f64::NAN;
    let mut pade_fallbacks = 0usize;
    let status = (|| -> Result<PointValues, String> {
        let phys = cfg.physical(d, f).map_err(|e| e.to_string())?;
        let grid = build_grid(&phys, cfg.n_x).map_err(|e| e.to_string())?;
        let envelope =
            sample_envelope(d, cfg.x0, cfg.width_fraction, cfg.n_x).map_err(|e| e.to_string())?;

        // Primary sheet model, plus the local-only variant when the nonlocal
        // model is requested.
        let (sigma, sigma_local) = match &cfg.graphene {
            None => (SigmaPair::ZERO, None),
            Some(g) if !g.nonlocal => (sigma_pair(g, f).map_err(|e| e.to_string())?, None),
            Some(g) => (
                sigma_pair(g, f).map_err(|e| e.to_string())?,
                Some(sigma_pair(&g.with_nonlocal(false), f).map_err(|e| e.to_string())?),
            ),
        };
        min_abs_det = determinant_profile(&grid, &phys, &sigma, cfg.x0).min_abs;

        let (u, w, fallbacks) = solve_fields(cfg, &grid, &phys, &sigma, &envelope, solver)?;
        pade_fallbacks = fallbacks;
        let obs = efficiencies(&grid, &phys, &u, &w).map_err(|e| e.to_string())?;

        let (a_local, a_nonlocal) = match &sigma_local {
            None => (None, None),
            Some(sl) => {
                let (ul, wl, _) = solve_fields(cfg, &grid, &phys, sl, &envelope, solver)?;
                let obs_l = efficiencies(&grid, &phys, &ul, &wl).map_err(|e| e.to_string())?;
                (Some(obs_l.a), Some(obs.a))
            }
        };
        Ok(PointValues {
            r: obs.r,
            t: obs.t,
            a: obs.a,
            a_local,
            a_nonlocal,
        })
    })();
    PointResult {
        d,
        f,
        solver: match solver {
            SolverChoice::Hope => "hope",
            SolverChoice::Collocation => "collocation",
            SolverChoice::Both => "both",
        },
        status,
        min_abs_det,
        pade_fallbacks,
    }
}

/// The deterministic task list: periods outermost, frequencies next, solver
/// innermost (hope before collocation when both are requested).
pub fn sweep_points(cfg: &RunConfig) -> Vec<(f64, f64, SolverChoice)> {
    let solvers: &[SolverChoice] = match cfg.solver {
        SolverChoice::Hope => &[SolverChoice::Hope],
        SolverChoice::Collocation => &[SolverChoice::Collocation],
        SolverChoice::Both => &[SolverChoice::Hope, SolverChoice::Collocation],
    };
    let f_grid = cfg.f_grid();
    let mut points = Vec::with_capacity(cfg.d_list.len() * f_grid.len() * solvers.len());
    for &d in &cfg.d_list {
        for &f in &f_grid {
            for &s in solvers {
                points.push((d, f, s));
            }
        }
    }
    points
}

/// Run the sweep with one task per (d, f, solver) point. Collection preserves
/// the deterministic task order regardless of execution interleaving.
pub fn run_sweep(cfg: &RunConfig) -> Vec<PointResult> {
    sweep_points(cfg)
        .par_iter()
        .map(|&(d, f, s)| solve_point(cfg, d, f, s))
        .collect()
}

/// Sequential variant with identical semantics, for transparency checks.
pub fn run_sweep_sequential(cfg: &RunConfig) -> Vec<PointResult> {
    sweep_points(cfg)
        .iter()
        .map(|&(d, f, s)| solve_point(cfg, d, f, s))
        .collect()
}

/// Whether the output carries the A_local/A_nonlocal comparison columns.
pub fn both_models(cfg: &RunConfig) -> bool {
    cfg.graphene.as_ref().is_some_and(|g| g.nonlocal)
}

pub fn csv_header(with_models: bool) -> String {
    let mut s = String::from("d_um,f_THz,solver,status,R,T,A");
    if with_models {
        s.push_str(",A_local,A_nonlocal");
    }
    s.push_str(",min_abs_determinant,pade_fallback_count");
    s
}

fn fmt_float(x: f64) -> String {
    format!("{:.16e}", x)
}

fn sanitize(message: &str) -> String {
    message
        .replace(['\n', '\r'], " ")
        .replace(',', ";")
        .replace('"', "'")
}

pub fn csv_row(result: &PointResult, with_models: bool) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "{},{},{},",
        fmt_float(result.d / 1e-6),
        fmt_float(result.f / 1e12),
        result.solver
    );
    match &result.status {
        Ok(v) => {
            let _ = write!(
                s,
                "ok,{},{},{}",
                fmt_float(v.r),
                fmt_float(v.t),
                fmt_float(v.a)
            );
            if with_models {
                let _ = write!(
                    s,
                    ",{},{}",
                    fmt_float(v.a_local.unwrap_or(f64::NAN)),
                    fmt_float(v.a_nonlocal.unwrap_or(f64::NAN))
                );
            }
        }
        Err(message) => {
            let nan = fmt_float(f64::NAN);
            let _ = write!(s, "{},{},{},{}", sanitize(message), nan, nan, nan);
            if with_models {
                let _ = write!(s, ",{},{}", nan, nan);
            }
        }
    }
    let _ = write!(
        s,
        ",{},{}",
        fmt_float(result.min_abs_det),
        result.pade_fallbacks
    );
    s
}

/// Render the full CSV (header plus one row per result, trailing newline).
pub fn render_csv(cfg: &RunConfig, results: &[PointResult]) -> String {
    let with_models = both_models(cfg);
    let mut s = csv_header(with_models);
    s.push('\n');
    for r in results {
        s.push_str(&csv_row(r, with_models));
        s.push('\n');
    }
    s
}

/// Write the CSV and the `<out>.meta.toml` sidecar holding the resolved
/// configuration.
pub fn write_outputs(
    out_path: &Path,
    cfg: &RunConfig,
    results: &[PointResult],
) -> anyhow::Result<()> {
    fs::write(out_path, render_csv(cfg, results))
        .with_context(|| format!("writing {}", out_path.display()))?;
    let mut meta = out_path.as_os_str().to_owned();
    meta.push(".meta.toml");
    let meta_path = std::path::PathBuf::from(meta);
    fs::write(&meta_path, cfg.to_toml_string())
        .with_context(|| format!("writing {}", meta_path.display()))?;
    Ok(())
}

/// Per-order norm table for one (d, f) point: order, ||U_l||, ||W_l||, and
/// successive ratios (reported as "undefined" where the previous norm is 0).
pub fn convergence_report(cfg: &RunConfig, d: f64, f: f64) -> Result<String, String> {
    let phys = cfg.physical(d, f).map_err(|e| e.to_string())?;
    let grid = build_grid(&phys, cfg.n_x).map_err(|e| e.to_string())?;
    let envelope =
        sample_envelope(d, cfg.x0, cfg.width_fraction, cfg.n_x).map_err(|e| e.to_string())?;
    let sigma = match &cfg.graphene {
        None => SigmaPair::ZERO,
        Some(g) => sigma_pair(g, f).map_err(|e| e.to_string())?,
    };
    let series =
        hope_recursion(&grid, &phys, &sigma, &envelope, cfg.order).map_err(|e| e.to_string())?;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "# convergence d_um={} f_THz={}",
        fmt_float(d / 1e-6),
        fmt_float(f / 1e12)
    );
    let _ = writeln!(s, "l,norm_U,norm_W,ratio_U,ratio_W");
    let ratio = |prev: f64, cur: f64| -> String {
        if prev == 0.0 {
            "undefined".to_string()
        } else {
            format!("{:.6e}", cur / prev)
        }
    };
    for (l, &(nu, nw)) in series.norm_trace.iter().enumerate() {
        let (ru, rw) = if l == 0 {
            ("-".to_string(), "-".to_string())
        } else {
            let (pu, pw) = series.norm_trace[l - 1];
            (ratio(pu, nu), ratio(pw, nw))
        };
        let _ = writeln!(s, "{l},{:.6e},{:.6e},{ru},{rw}", nu, nw);
    }
    Ok(s)
}
