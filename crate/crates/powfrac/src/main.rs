fn main() {
    std::process::exit(powfrac::cli::run());
}
