use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use varsens::{run, Cli};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(&cli, &args) {
        Ok(outcome) => {
            let _ = std::io::stdout().write_all(outcome.report.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
