fn main() {
    std::process::exit(weber_core::cli::main_with_args(std::env::args_os()));
}
