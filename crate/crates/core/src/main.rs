fn main() {
    std::process::exit(chaoswave::cli::main());
}
