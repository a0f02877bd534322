fn main() {
    std::process::exit(lepm_cli::run(std::env::args_os()));
}
