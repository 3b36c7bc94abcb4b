fn main() {
    std::process::exit(ffr_cli::run(std::env::args_os()));
}
