fn main() -> std::process::ExitCode {
    steinolo::cli::main_with_args(std::env::args_os()).into()
}
