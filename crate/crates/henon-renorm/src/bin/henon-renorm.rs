fn main() {
    std::process::exit(henon_renorm::experiments::cli_main(std::env::args_os()));
}
