fn main() {
    std::process::exit(mepal::cli::run(std::env::args_os()));
}
