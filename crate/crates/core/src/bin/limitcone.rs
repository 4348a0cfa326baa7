fn main() {
    std::process::exit(limitcone::cli::run(std::env::args()));
}
