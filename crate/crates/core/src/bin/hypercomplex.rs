fn main() {
    std::process::exit(hypercomplex::cli::run(std::env::args_os()));
}
