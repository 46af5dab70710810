fn main() {
    std::process::exit(qlie_core::cli::run(std::env::args_os()));
}
