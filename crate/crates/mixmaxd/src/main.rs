fn main() {
    std::process::exit(mixmaxd::cli::run(std::env::args_os()));
}
