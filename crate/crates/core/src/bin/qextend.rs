fn main() {
    std::process::exit(qextend::cli::main_with_args(std::env::args_os()));
}
