use std::path::PathBuf;
use std::process::ExitCode;

use cbsars_cli::{run_experiment, ConfigBuilder, ExitStatus};
use clap::Parser;

/// Runs step-size adaptive evolution strategies on scaling-invariant functions and writes
/// CSV traces and summaries.
#[derive(Parser, Debug)]
#[command(name = "cbsars", version)]
struct Args {
    /// Config file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// trajectory, normalized-chain, cr-estimate, invariance-suite, si-check or constant-sigma.
    #[arg(long)]
    mode: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Override a config key, e.g. `--set sigma0=1e-6`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn fail(status: ExitStatus, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(status as u8)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut builder = ConfigBuilder::new();
    if let Some(path) = &args.config {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(ExitStatus::ConfigError, format!("{}: {e}", path.display())),
        };
        if let Err(e) = builder.parse_text(&text) {
            return fail(ExitStatus::ConfigError, format!("{}: {e}", path.display()));
        }
    }
    let mut flags: Vec<String> = args.overrides.clone();
    if let Some(m) = &args.mode {
        flags.push(format!("mode={m}"));
    }
    if let Some(s) = args.seed {
        flags.push(format!("seed={s}"));
    }
    for a in &flags {
        if let Err(e) = builder.set(a) {
            return fail(ExitStatus::ConfigError, e);
        }
    }
    let cfg = match builder.build() {
        Ok(c) => c,
        Err(e) => return fail(ExitStatus::ConfigError, e),
    };
    match run_experiment(&cfg, &args.out) {
        Ok(outcome) => {
            for m in &outcome.messages {
                println!("{m}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            ExitCode::from(outcome.status as u8)
        }
        Err(e) => fail(e.status(), e),
    }
}
