fn main() {
    std::process::exit(ofpca::cli::main_with_args(std::env::args_os()));
}
