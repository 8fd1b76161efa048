fn main() {
    std::process::exit(permcover::cli::run_from_args());
}
