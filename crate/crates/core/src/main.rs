fn main() {
    std::process::exit(causalab::cli::main_with_args(std::env::args_os()));
}
