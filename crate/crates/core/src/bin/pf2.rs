fn main() {
    std::process::exit(proximity_forest::cli::run(std::env::args_os()));
}
