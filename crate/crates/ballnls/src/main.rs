fn main() {
    std::process::exit(ballnls::cli::run(std::env::args_os()));
}
