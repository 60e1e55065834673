fn main() {
    std::process::exit(prflow::cli::run(std::env::args_os()));
}
