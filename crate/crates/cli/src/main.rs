use std::process::ExitCode;

fn main() -> ExitCode {
    wasp_cli::main_with(std::env::args_os())
}
