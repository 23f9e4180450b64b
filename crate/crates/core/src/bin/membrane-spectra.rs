fn main() {
    std::process::exit(membrane_spectra::cli::main_with_args(std::env::args_os()));
}
