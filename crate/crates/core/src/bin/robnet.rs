fn main() {
    std::process::exit(robnet::cli::run(std::env::args_os()));
}
