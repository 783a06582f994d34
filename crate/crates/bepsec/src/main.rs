fn main() -> std::process::ExitCode {
    bepsec::cli::main_with(std::env::args_os())
}
