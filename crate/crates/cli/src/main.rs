fn main() {
    std::process::exit(onsager_cli::run(std::env::args_os()));
}
