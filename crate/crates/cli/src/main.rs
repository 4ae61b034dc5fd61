fn main() {
    std::process::exit(bmcc_cli::run(std::env::args_os()));
}
