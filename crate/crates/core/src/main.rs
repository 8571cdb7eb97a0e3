fn main() {
    std::process::exit(gammaforge::cli::main_with_args());
}
