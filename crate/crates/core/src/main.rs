fn main() {
    std::process::exit(kakeya::cli::main());
}
