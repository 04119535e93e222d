fn main() {
    std::process::exit(circcs::cli::run(std::env::args_os()));
}
