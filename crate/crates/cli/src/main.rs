use std::io::Write;
use std::process::ExitCode;

use fermatlab::Budget;

fn main() -> ExitCode {
    let outcome = fermatlab_cli::run(std::env::args_os(), Budget::from_env());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
