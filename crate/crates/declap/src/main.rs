fn main() {
    std::process::exit(declap::cli::run(std::env::args_os()));
}
