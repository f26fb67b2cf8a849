use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(djdecide::cli::run(std::env::args_os()))
}
