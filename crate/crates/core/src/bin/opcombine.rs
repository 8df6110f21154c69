fn main() {
    std::process::exit(opcombine::cli::main_with_args(std::env::args_os()));
}
