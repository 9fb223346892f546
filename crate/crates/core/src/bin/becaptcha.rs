fn main() {
    std::process::exit(becaptcha::cli::run(std::env::args_os()));
}
