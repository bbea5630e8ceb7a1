fn main() {
    std::process::exit(coherent_clock::cli::run(std::env::args_os()));
}
