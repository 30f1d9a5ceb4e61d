//! Binary entry point: forwards the process arguments to the command-line
//! front end and exits with its status code.

use std::process::ExitCode;

fn main() -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    let code = kstab::cli::run(std::env::args_os(), &mut stdout);
    ExitCode::from(code as u8)
}
