fn main() {
    std::process::exit(composite_hr::cli::run_from_env());
}
