fn main() {
    std::process::exit(latfac::cli::main_with(std::env::args_os()));
}
