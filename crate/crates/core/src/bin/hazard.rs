fn main() {
    std::process::exit(hazard_kit::cli::dispatch(std::env::args_os()));
}
