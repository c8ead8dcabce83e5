fn main() -> std::process::ExitCode {
    densketch::cli::main_with_args(std::env::args_os())
}
