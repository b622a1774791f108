fn main() {
    std::process::exit(bekenstein_cli::run(std::env::args_os()));
}
