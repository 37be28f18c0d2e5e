fn main() {
    std::process::exit(bellscope::cli::run());
}
