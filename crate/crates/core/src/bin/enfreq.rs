fn main() {
    std::process::exit(enfreq::cli::run(std::env::args_os()));
}
