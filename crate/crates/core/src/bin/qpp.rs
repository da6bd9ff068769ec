fn main() {
    std::process::exit(qpp::cli::main());
}
