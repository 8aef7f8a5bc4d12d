fn main() {
    std::process::exit(adscmc::cli::main_with_args(std::env::args_os()));
}
