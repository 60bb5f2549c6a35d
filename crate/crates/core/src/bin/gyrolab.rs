fn main() {
    std::process::exit(gyrolab::cli::run(std::env::args_os()));
}
