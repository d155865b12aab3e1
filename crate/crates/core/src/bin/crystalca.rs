fn main() {
    std::process::exit(crystalca::cli::cli_main(std::env::args_os()));
}
