fn main() {
    std::process::exit(eigenfloor_cli::run_cli(std::env::args_os()));
}
