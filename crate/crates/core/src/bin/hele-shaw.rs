fn main() {
    std::process::exit(hele_shaw_limit::cli::cli_main(std::env::args_os()));
}
