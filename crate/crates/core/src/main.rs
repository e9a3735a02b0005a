use std::process::ExitCode;

fn main() -> ExitCode {
    mofs::cli::run_cli(std::env::args_os())
}
