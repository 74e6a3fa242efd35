fn main() {
    std::process::exit(hamlab::cli::run(std::env::args_os()));
}
