fn main() {
    std::process::exit(maslov_cli::run(std::env::args_os()));
}
