fn main() {
    std::process::exit(godeaux_lines::cli::run(std::env::args_os()));
}
