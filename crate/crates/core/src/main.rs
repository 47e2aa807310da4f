fn main() {
    std::process::exit(feature_clock::cli::main_with_args(std::env::args_os()));
}
