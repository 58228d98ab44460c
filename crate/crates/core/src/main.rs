fn main() -> std::process::ExitCode {
    hpnewton::cli::main_with_args(std::env::args_os())
}
