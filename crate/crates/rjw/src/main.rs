fn main() {
    std::process::exit(rjw::cli::run_command(std::env::args_os()));
}
