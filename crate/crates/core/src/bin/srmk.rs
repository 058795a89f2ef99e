fn main() {
    std::process::exit(srmk::cli::main_with_args(std::env::args_os()));
}
