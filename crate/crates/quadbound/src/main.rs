use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(quadbound::cli::run())
}
