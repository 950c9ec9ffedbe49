fn main() {
    std::process::exit(cubic_canon::cli::run());
}
