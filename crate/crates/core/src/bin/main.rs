fn main() {
    std::process::exit(hypernym::cli::run(std::env::args_os()));
}
