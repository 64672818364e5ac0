fn main() {
    std::process::exit(lehmer::cli::main_with_args(std::env::args_os()));
}
