//! `fracqm`: batch experiments from JSON configs and point evaluations
//! from flags.
//!
//! Exit status: 0 when everything converged, 2 when some computation did
//! not, 1 for malformed input.

mod config;
mod error;
mod eval;
mod experiments;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::error::{CliError, Result};
use crate::eval::EvalCommand;

#[derive(Debug, Parser)]
#[command(name = "fracqm", version, about = "Fractional quantum mechanics numerics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config; writes <prefix>.csv
    /// and <prefix>.json.
    Run {
        config: PathBuf,
        /// Output prefix; overrides `parameters.output`.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate one quantity and print value and error estimate.
    Eval {
        /// Print a JSON object instead of a text line.
        #[arg(long, global = true)]
        json: bool,
        #[command(subcommand)]
        what: EvalCommand,
    },
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("FRACQM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| CliError::Threads(raw.clone()))?;
    if n == 0 {
        return Err(CliError::Threads(raw));
    }
    // fails only if a global pool already exists
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// `parameters.output` is relative to the config file; the default prefix
/// is the config path with its extension replaced by `.report`.
fn output_prefix(config_path: &Path, from_config: Option<&Path>, flag: Option<PathBuf>) -> PathBuf {
    if let Some(p) = flag {
        return p;
    }
    match from_config {
        Some(p) if p.is_absolute() => p.to_path_buf(),
        Some(p) => config_path.parent().unwrap_or(Path::new(".")).join(p),
        None => config_path.with_extension("report"),
    }
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (a.canonicalize(), b.canonicalize()) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn run(config_path: &Path, output: Option<PathBuf>) -> Result<u8> {
    let cfg = config::load(config_path)?;
    let prefix = output_prefix(config_path, cfg.output(), output);
    let csv_path = with_suffix(&prefix, ".csv");
    let json_path = with_suffix(&prefix, ".json");
    if same_file(&json_path, config_path) || same_file(&csv_path, config_path) {
        return Err(CliError::invalid("output", format!("{} would overwrite the config", prefix.display())));
    }
    let outcome = experiments::run(&cfg)?;
    let converged = outcome.flags.iter().filter(|f| f.converged).count();
    let summary = json!({
        "tool": "fracqm",
        "version": fracqm::VERSION,
        "kind": cfg.kind(),
        "config": config_path.display().to_string(),
        "inputs": cfg,
        "csv": csv_path.display().to_string(),
        "rows": outcome.flags.len(),
        "converged_rows": converged,
        "all_converged": outcome.all_converged(),
        "row_flags": outcome.flags,
        "results": outcome.results,
    });
    write(&csv_path, &outcome.csv)?;
    let text = serde_json::to_string_pretty(&summary).expect("summary is plain data");
    write(&json_path, &(text + "\n"))?;
    println!(
        "{}: {converged}/{} rows converged; wrote {} and {}",
        cfg.kind(),
        outcome.flags.len(),
        csv_path.display(),
        json_path.display()
    );
    Ok(if outcome.all_converged() { 0 } else { 2 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Run { config, output } => run(&config, output),
        Command::Eval { json, what } => eval::eval(&what, json),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
