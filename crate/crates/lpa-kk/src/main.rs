use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(lpa_kk::cli::main_with_args(std::env::args()) as u8)
}
