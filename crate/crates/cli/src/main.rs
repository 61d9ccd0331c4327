use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use hope_cli::{convergence_report, run_sweep, write_outputs};
use hope_core::{RunConfig, SolverChoice};

/// Plane-wave scattering sweeps for periodic graphene ribbon arrays.
#[derive(Debug, Parser)]
#[command(name = "hope", version, about)]
struct Cli {
    /// Run configuration file (keyed text; see README for the schema)
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path; a <out>.meta.toml sidecar records the resolved config
    #[arg(long)]
    out: PathBuf,
    /// Override the configured solver: hope, collocation, or both
    #[arg(long)]
    solver: Option<String>,
    /// Override the series summation: taylor or pade
    #[arg(long)]
    summation: Option<String>,
    /// Print a per-order convergence table for every (d, f) sweep point
    #[arg(long)]
    convergence: bool,
    /// Suppress progress output
    #[arg(long)]
    quiet: bool,
}

fn fail_config(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };

    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => return fail_config(format_args!("reading {}: {e}", cli.config.display())),
    };
    let mut cfg = match RunConfig::from_toml_str(&text) {
        Ok(c) => c,
        Err(e) => return fail_config(e),
    };
    if let Some(tag) = &cli.solver {
        cfg.solver = match SolverChoice::parse(tag) {
            Ok(s) => s,
            Err(e) => return fail_config(e),
        };
    }
    if let Some(tag) = &cli.summation {
        cfg.pade = match tag.as_str() {
            "pade" => true,
            "taylor" => false,
            other => {
                return fail_config(format_args!(
                    "unknown summation \"{other}\" (expected taylor or pade)"
                ))
            }
        };
    }

    let results = run_sweep(&cfg);
    if let Err(e) = write_outputs(&cli.out, &cfg, &results) {
        return fail_config(format_args!("{e:#}"));
    }

    if cli.convergence {
        for &d in &cfg.d_list {
            for &f in &cfg.f_grid() {
                match convergence_report(&cfg, d, f) {
                    Ok(table) => print!("{table}"),
                    Err(e) => eprintln!(
                        "convergence diagnostics failed at d = {} m, f = {} Hz: {e}",
                        d, f
                    ),
                }
            }
        }
    }

    let failed = results.iter().filter(|r| r.status.is_err()).count();
    if !cli.quiet {
        eprintln!(
            "wrote {} rows to {} ({} failed)",
            results.len(),
            cli.out.display(),
            failed
        );
    }
    if failed == results.len() && !results.is_empty() {
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
