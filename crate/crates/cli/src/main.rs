use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ffvar::config::{ExperimentConfig, Kind, Overrides, Resolved};
use ffvar::RunError;

/// Twisted L-functions over F_q[t] and variance of von Mangoldt sums in
/// arithmetic progressions.
///
/// Exit status: 0 success, 1 invariant failure, 2 config error, 3 resource
/// budget exceeded.
#[derive(Parser, Debug)]
#[command(name = "ffvar", version)]
struct Cli {
    /// Experiment to run; may also come from --kind or the config file.
    #[arg(value_enum)]
    command: Option<Kind>,
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Field order, or a comma-separated q-ladder for sweep.
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<u64>>,
    /// CSV output path; the JSON sidecar goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn resolve(cli: Cli) -> Result<Resolved, RunError> {
    let kind = match (cli.command, cli.kind) {
        (Some(a), Some(b)) if a != b => return Err(RunError::Config(format!("subcommand {a} conflicts with --kind {b}"))),
        (a, b) => a.or(b),
    };
    let file = match &cli.config {
        Some(p) => ExperimentConfig::from_file(p)?,
        None => ExperimentConfig::default(),
    };
    let overrides = Overrides { kind, q: cli.q, out: cli.out, seed: cli.seed, threads: cli.threads };
    Resolved::new(file.apply(&overrides))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = resolve(cli).and_then(|r| ffvar::execute(&r));
    match result {
        Ok(summary) if summary.failures.is_empty() => {
            eprintln!("wrote {} rows to {} ({})", summary.rows, summary.csv.display(), summary.sidecar.display());
            ExitCode::SUCCESS
        }
        Ok(summary) => {
            for f in &summary.failures {
                eprintln!("FAILED {f}");
            }
            eprintln!("wrote {} with {} invariant failure(s)", summary.csv.display(), summary.failures.len());
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
