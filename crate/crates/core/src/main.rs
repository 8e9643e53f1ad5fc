fn main() {
    std::process::exit(orientlab::cli::run(std::env::args_os()));
}
