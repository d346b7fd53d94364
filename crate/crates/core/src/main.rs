fn main() {
    std::process::exit(relaysel::cli::run(std::env::args_os()));
}
