fn main() {
    std::process::exit(dualbern::cli::run());
}
