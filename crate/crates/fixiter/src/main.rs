fn main() {
    std::process::exit(fixiter::run_cli(std::env::args_os()));
}
