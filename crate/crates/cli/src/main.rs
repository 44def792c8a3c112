fn main() {
    std::process::exit(acyclab_cli::dispatch(std::env::args_os()));
}
