fn main() {
    std::process::exit(colorsat::cli::main_with_args(std::env::args_os()));
}
