fn main() {
    std::process::exit(logineq::cli::run(std::env::args_os()));
}
