fn main() {
    std::process::exit(fracwave::cli::main_with_args(std::env::args().skip(1)));
}
