fn main() {
    std::process::exit(qver::cli::run());
}
