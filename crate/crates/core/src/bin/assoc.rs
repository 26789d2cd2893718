fn main() {
    std::process::exit(assoc_core::cli::main_with_args(std::env::args_os()));
}
