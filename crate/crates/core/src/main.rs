use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gossez_lab::report::{catalog_listing, emit, run_checks, CheckConfig, Format};
use gossez_lab::{rational, LabError};

#[derive(Parser)]
#[command(name = "gossez-lab", version, about = "Exact-arithmetic checks for the Gossez operator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run catalog checks and write a report.
    Run {
        /// Comma-separated catalog names, or `all`.
        #[arg(long, default_value = "all", value_delimiter = ',')]
        checks: Vec<String>,
        #[arg(long, default_value_t = 64)]
        truncation: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0, env = "GOSSEZ_LAB_SEED")]
        seed: u64,
        #[arg(long, default_value = "1000000")]
        scale_max: String,
        #[arg(long, default_value = "json")]
        format: String,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the check catalog.
    List,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::List => {
            print!("{}", catalog_listing());
            ExitCode::SUCCESS
        }
        Command::Run {
            checks,
            truncation,
            trials,
            seed,
            scale_max,
            format,
            out,
        } => {
            let format: Format = match format.parse() {
                Ok(f) => f,
                Err(e) => return usage(e),
            };
            let scale_max = match rational::parse(&scale_max) {
                Ok(v) => v,
                Err(e) => return usage(e),
            };
            let config = CheckConfig {
                checks: checks.into_iter().map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect(),
                truncation,
                trials,
                seed,
                scale_max,
                format,
                out: out.clone(),
            };
            let report = match run_checks(&config) {
                Ok(r) => r,
                Err(e @ LabError::UnknownCheck(_)) => return usage(e),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let bytes = emit(&report, format);
            let written = match &out {
                Some(path) => std::fs::write(path, &bytes),
                None => std::io::stdout().write_all(&bytes),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(3);
            }
            for r in &report.checks {
                eprintln!("{:<10} {:<20} ({} ms)", r.name, r.status.as_str(), r.wallclock_ms);
            }
            match report.first_failure() {
                Some(f) => {
                    eprintln!(
                        "check {} failed: expected {}, got {}",
                        f.name,
                        f.expected.as_str(),
                        f.status.as_str()
                    );
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
    }
}
