fn main() {
    std::process::exit(vega_core::cli::run(std::env::args_os()));
}
