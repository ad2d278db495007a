fn main() {
    std::process::exit(pradial::cli::main_with_args(std::env::args_os()));
}
