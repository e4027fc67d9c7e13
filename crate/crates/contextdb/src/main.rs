use std::process::ExitCode;

fn main() -> ExitCode {
    contextdb::cli::run()
}
