fn main() {
    std::process::exit(fusionring::cli::run(std::env::args().skip(1)));
}
