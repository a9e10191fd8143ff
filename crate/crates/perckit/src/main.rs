fn main() {
    std::process::exit(perckit::cli::run());
}
