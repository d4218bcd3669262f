fn main() {
    std::process::exit(gl3lab::cli::main_with_args(std::env::args_os()));
}
