fn main() {
    std::process::exit(unig::run_cli(std::env::args_os()));
}
