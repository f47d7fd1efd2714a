fn main() {
    std::process::exit(kohlab::cli::run(std::env::args_os()));
}
