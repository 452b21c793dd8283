fn main() {
    std::process::exit(selmon::cli::main_from(std::env::args_os()));
}
