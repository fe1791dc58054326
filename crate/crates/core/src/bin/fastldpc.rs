fn main() {
    std::process::exit(fastldpc::cli::main_with_args(std::env::args_os()));
}
