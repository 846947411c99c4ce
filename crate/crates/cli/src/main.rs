use std::process::ExitCode;

use clap::Parser;
use dgcat_cli::cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = execute(&cli);
    let report = &outcome.report;
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("cannot write report to {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if let Some(e) = &report.error {
        eprintln!("error [{}] {}", e.kind, e.message);
    } else if cli.quiet {
        print!("{}", report.to_text(true));
    } else {
        print!("{}{}", outcome.text, report.to_text(false));
    }
    ExitCode::from(report.status.exit_code() as u8)
}
