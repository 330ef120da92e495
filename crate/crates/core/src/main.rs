fn main() {
    std::process::exit(oma_core::cli::run_cli(std::env::args_os()));
}
