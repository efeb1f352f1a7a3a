fn main() {
    std::process::exit(fockmel::cli::main_with_args(std::env::args_os()));
}
