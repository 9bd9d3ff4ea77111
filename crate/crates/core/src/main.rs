fn main() {
    std::process::exit(hadamard_core::cli::run(std::env::args_os()));
}
