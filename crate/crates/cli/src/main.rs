use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use forge_cli::{emit_report, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(cli.command) {
        Ok(mut report) => {
            report.duration_ms = started.elapsed().as_millis();
            let bytes = match emit_report(&report, cli.format) {
                Ok(bytes) => bytes,
                Err(err) => {
                    eprintln!("error: {err:#}");
                    return ExitCode::from(2);
                }
            };
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &bytes)
                    .map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display())),
                None => std::io::stdout().write_all(&bytes).map_err(Into::into),
            };
            if let Err(err) = written {
                eprintln!("error: {err:#}");
                return ExitCode::from(2);
            }
            eprintln!(
                "{}: {} in {} ms",
                report.experiment,
                if report.all_verified() { "ok" } else { "verification failed" },
                report.duration_ms
            );
            if report.all_verified() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
