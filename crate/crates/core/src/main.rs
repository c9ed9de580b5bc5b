fn main() {
    std::process::exit(mertens_lab::cli::run(std::env::args_os()));
}
