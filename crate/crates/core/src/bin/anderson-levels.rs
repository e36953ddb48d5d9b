use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anderson_levels::io::{parse_config, resolve_out_dir, run, RunManifest};
use clap::Parser;

/// Run one configured experiment and write its CSVs and manifest.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// TOML run description, or a manifest.json from an earlier run.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config; default `out`).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker threads (overrides the config).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    verbose: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let text = match fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", cli.config.display());
            return ExitCode::from(2);
        }
    };
    let text = if cli.config.extension().is_some_and(|e| e == "json") {
        match RunManifest::load(&cli.config) {
            Ok(m) => m.config,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        }
    } else {
        text
    };
    let mut config = match parse_config(&text) {
        Ok(c) => c,
        Err(errors) => {
            eprintln!("invalid configuration:");
            for e in &errors.0 {
                eprintln!("  {e}");
            }
            return ExitCode::from(2);
        }
    };
    if cli.threads.is_some() {
        config.threads = cli.threads;
    }
    let out_dir = resolve_out_dir(&config, cli.out_dir);
    match run(&config, &out_dir) {
        Ok(m) if m.succeeded() => {
            println!("{}: {} rows, outputs in {}", m.experiment, m.rows, out_dir.display());
            ExitCode::SUCCESS
        }
        Ok(m) => {
            eprintln!("{}: {} of {} rows failed", m.experiment, m.failed_rows, m.rows);
            for f in &m.failures {
                eprintln!("  {} [{}]: {}", f.file, f.row, f.error);
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
