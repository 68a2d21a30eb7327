fn main() {
    std::process::exit(cvd_cli::run(std::env::args_os()));
}
