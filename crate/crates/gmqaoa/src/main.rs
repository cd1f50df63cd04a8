use std::process::ExitCode;

fn main() -> ExitCode {
    gmqaoa::cli::main_with_args(std::env::args_os())
}
