use std::process::ExitCode;

fn main() -> ExitCode {
    nlcs::cli::main_with_args(std::env::args_os())
}
