fn main() {
    std::process::exit(moyal::cli::run(std::env::args_os()));
}
