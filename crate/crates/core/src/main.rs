fn main() {
    std::process::exit(kahler_cst::cli::run(std::env::args_os()));
}
