fn main() {
    std::process::exit(powlab_cli::main_with(std::env::args_os()));
}
