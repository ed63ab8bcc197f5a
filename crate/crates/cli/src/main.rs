fn main() {
    std::process::exit(hyperfocus_cli::run(std::env::args_os()));
}
