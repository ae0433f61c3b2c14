use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fankoszul::cli_reports::{error_json, exit_code, run, Format, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&config) {
        Ok(report) => {
            let _ = std::io::stdout().write_all(report.render(config.format).as_bytes());
            ExitCode::from(if report.pass { 0 } else { 1 })
        }
        Err(e) => {
            match config.format {
                Format::Json => print!("{}", error_json(&e)),
                Format::Text => eprintln!("error: {e}"),
            }
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
