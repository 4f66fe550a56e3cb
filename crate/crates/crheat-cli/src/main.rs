fn main() {
    std::process::exit(crheat_cli::run(std::env::args_os()));
}
