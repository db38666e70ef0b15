fn main() {
    std::process::exit(pgauss_cli::run());
}
