fn main() {
    std::process::exit(h2ion::cli::run(std::env::args_os()));
}
