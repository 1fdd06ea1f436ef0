use std::process::ExitCode;

fn main() -> ExitCode {
    skewtheta::cli::main_with_args(std::env::args_os())
}
