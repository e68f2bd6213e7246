//! Experiment runner for twisted L-functions over `F_q[t]` and the variance
//! of von Mangoldt sums in arithmetic progressions.
//!
//! A run is described by an [`config::ExperimentConfig`] (TOML, overridable
//! from the command line), resolved and validated into a
//! [`config::Resolved`], and executed by [`execute`], which writes a CSV
//! table and a JSON sidecar next to it.

pub mod config;
pub mod experiments;
pub mod pattern;
pub mod report;
pub mod selftest;

use std::path::PathBuf;
use std::time::Instant;

use serde_json::json;

use config::Resolved;

/// Failure classes, one per nonzero exit status.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    #[error("output error: {0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Invariant(_) => 1,
            RunError::Config(_) | RunError::Io(_) => 2,
            RunError::Resource(_) => 3,
        }
    }
}

impl From<ffvar_core::Error> for RunError {
    fn from(e: ffvar_core::Error) -> Self {
        use ffvar_core::Error as E;
        match e {
            E::InvalidInput(m) => RunError::Config(m),
            E::Resource(m) => RunError::Resource(m),
            E::Inconsistent(_) | E::NoConvergence(_) => RunError::Invariant(e.to_string()),
        }
    }
}

#[derive(Debug)]
pub struct RunSummary {
    pub csv: PathBuf,
    pub sidecar: PathBuf,
    pub rows: usize,
    /// Invariant failures found while running; nonempty means exit status 1.
    pub failures: Vec<String>,
}

/// Runs the experiment and writes its outputs. Invariant failures detected
/// along the way are written to the sidecar and returned in the summary.
pub fn execute(r: &Resolved) -> Result<RunSummary, RunError> {
    if r.threads > 0 {
        // the global pool can be set once per process; later calls keep it
        let _ = rayon::ThreadPoolBuilder::new().num_threads(r.threads).build_global();
    }
    let start = Instant::now();
    let outcome = experiments::run(r)?;
    let elapsed = start.elapsed().as_secs_f64();
    let sidecar = json!({
        "tool": "ffvar",
        "version": env!("CARGO_PKG_VERSION"),
        "kind": r.kind.as_str(),
        "config": r.echo,
        "resolved": {
            "q": r.setups.iter().map(config::Setup::q).collect::<Vec<_>>(),
            "moduli": r.setups.iter().map(|s| s.modulus.to_string()).collect::<Vec<_>>(),
            "seed": r.seed,
            "threads": r.threads,
            "theorem_mode": r.theorem_mode,
        },
        "columns": outcome.table.header,
        "results": outcome.summary,
        "failures": outcome.failures,
        "timings": { "total_seconds": elapsed },
    });
    report::write_outputs(&r.out, &outcome.table, &sidecar)?;
    Ok(RunSummary {
        csv: r.out.clone(),
        sidecar: report::sidecar_path(&r.out),
        rows: outcome.table.rows.len(),
        failures: outcome.failures,
    })
}
