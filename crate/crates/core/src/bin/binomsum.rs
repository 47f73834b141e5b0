fn main() {
    std::process::exit(binomsum::cli::main());
}
