use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lrb_cli::{dispatch, finish, write_report, Cli, CliError, GuardConfig, RunConfig};

fn run(cli: Cli) -> Result<String, (CliError, Option<std::path::PathBuf>)> {
    let out = cli.out.clone();
    let go = || -> Result<String, CliError> {
        let cfg = RunConfig::new(cli, GuardConfig::from_env()?)?;
        let outcome = dispatch(&cfg)?;
        finish(&cfg, &outcome)
    };
    go().map_err(|e| (e, out))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(text) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err((e, out)) => {
            eprintln!("error: {e}");
            if let CliError::Falsified {
                report: Some(report),
                ..
            } = &e
            {
                match write_report(out.as_deref(), report) {
                    Ok(Some(p)) => eprintln!("report written to {}", p.display()),
                    Ok(None) => print!("{report}"),
                    Err(w) => eprintln!("error: could not write the report: {w}"),
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
