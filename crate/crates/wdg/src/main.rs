fn main() {
    std::process::exit(wdg::cli::main_with(std::env::args_os()));
}
