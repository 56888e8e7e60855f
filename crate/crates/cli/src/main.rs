fn main() {
    std::process::exit(cebeam_cli::run(std::env::args_os()));
}
