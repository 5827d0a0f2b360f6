fn main() {
    std::process::exit(radex::cli::main());
}
