fn main() {
    std::process::exit(matwalk::harness::cli::main_with_args(std::env::args_os()));
}
