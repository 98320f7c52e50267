fn main() {
    std::process::exit(aplift::cli::run_command(std::env::args_os()));
}
