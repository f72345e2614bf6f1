fn main() {
    std::process::exit(guichard_cli::run(std::env::args_os()));
}
