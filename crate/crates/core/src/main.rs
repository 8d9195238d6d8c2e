fn main() {
    std::process::exit(fdslab::cli::run(std::env::args_os()));
}
