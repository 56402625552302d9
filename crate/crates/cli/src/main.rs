fn main() {
    std::process::exit(neron_cli::main_with(std::env::args_os()));
}
