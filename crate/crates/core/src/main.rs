fn main() {
    std::process::exit(pursuit::cli::main_with(std::env::args_os()));
}
