fn main() {
    std::process::exit(semicoarse::cli::main_with_args());
}
