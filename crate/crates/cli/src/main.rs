fn main() {
    std::process::exit(fockcert_cli::main_with_args(std::env::args_os()));
}
