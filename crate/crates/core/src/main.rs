fn main() {
    std::process::exit(pfsim_core::cli::run_cli(std::env::args_os()));
}
