fn main() {
    std::process::exit(hyperdet::cli::main_with_args(std::env::args_os()));
}
