fn main() {
    std::process::exit(gollgr::cli::main_with_args(std::env::args_os()));
}
