use std::process::ExitCode;

use peaking::cli::{run, CliError};

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(path) => {
            eprintln!("wrote {}", path.display());
            ExitCode::SUCCESS
        }
        Err(CliError::Clap(e)) => e.exit(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
