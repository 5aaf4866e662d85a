fn main() {
    std::process::exit(totsum_cli::run(std::env::args_os()));
}
