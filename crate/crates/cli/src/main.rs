fn main() {
    std::process::exit(lgks_cli::run(std::env::args_os()));
}
