fn main() {
    std::process::exit(loraplan::cli::run());
}
