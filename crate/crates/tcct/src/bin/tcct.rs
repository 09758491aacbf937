fn main() {
    std::process::exit(tcct::cli::run(std::env::args_os()));
}
