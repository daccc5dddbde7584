fn main() {
    std::process::exit(fracspec_cli::run(std::env::args_os()));
}
