fn main() {
    std::process::exit(bookram::cli::run(std::env::args().collect()));
}
