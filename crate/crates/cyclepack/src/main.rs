use std::process::ExitCode;

fn main() -> ExitCode {
    cyclepack::cli::main_entry()
}
