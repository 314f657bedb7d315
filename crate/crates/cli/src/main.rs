//! `vmv`: command-line access to exponent pairs, mean-value counts, exponential sums,
//! pair counts and the zeta exponent checks.

mod commands;
mod config;
mod output;
mod selftest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;

use commands::{Command, Settings};
use config::RunConfig;
use output::{render, Format, Meta};

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "vmv",
    version,
    about = "Exponent pairs, mean values and exponential sums"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Cap on worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Recorded in JSON output.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Add a generation-time header line.
    #[arg(long, global = true)]
    timestamp: bool,
    /// Largest t accepted by the zeta commands.
    #[arg(long, global = true)]
    max_t: Option<f64>,
    /// Read the whole run from a TOML file instead of the command line.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    if let Some(path) = &cli.config {
        if cli.command.is_some() {
            return usage("--config cannot be combined with a command");
        }
        let cfg = match RunConfig::load(path) {
            Ok(c) => c,
            Err(e) => return usage(&e),
        };
        cli = match Cli::try_parse_from(cfg.to_args()) {
            Ok(c) => c,
            Err(e) => return usage(&format!("config command: {e}")),
        };
    }
    let Some(command) = &cli.command else {
        return usage("no command given; see --help");
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            return usage(&format!("cannot set thread count: {e}"));
        }
    }
    let settings = Settings {
        max_t: cli.max_t.unwrap_or(Settings::default().max_t),
    };
    let report = match commands::run(command, settings) {
        Ok(r) => r,
        Err(vmv_core::Error::Check(msg)) => {
            eprintln!("check failed: {msg}");
            return ExitCode::from(EXIT_FAILED_CHECK);
        }
        Err(e) => return usage(&e.to_string()),
    };
    let meta = Meta {
        seed: cli.seed,
        timestamp: cli.timestamp.then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        }),
    };
    let bytes = match render(&report, cli.format.unwrap_or_default(), &meta) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILED_CHECK);
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::stdout().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_FAILED_CHECK);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        for f in &report.failures {
            eprintln!("failed: {f}");
        }
        ExitCode::from(EXIT_FAILED_CHECK)
    }
}
