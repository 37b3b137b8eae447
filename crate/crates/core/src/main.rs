fn main() {
    std::process::exit(rmdirac::cli::run(std::env::args_os()));
}
