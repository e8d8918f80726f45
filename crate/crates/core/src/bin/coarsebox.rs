fn main() {
    std::process::exit(coarsebox::cli::main_with_args(std::env::args_os()));
}
