use std::process::ExitCode;

use regtag::cli::{run_command, EXIT_INPUT};

fn main() -> ExitCode {
    let result = run_command(std::env::args_os());
    if result.exit_code == EXIT_INPUT {
        eprint!("{}", result.report);
    } else {
        print!("{}", result.report);
    }
    ExitCode::from(result.exit_code as u8)
}
