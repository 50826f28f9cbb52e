fn main() {
    std::process::exit(ptsim::cli::run());
}
