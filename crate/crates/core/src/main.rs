fn main() {
    std::process::exit(coulomb_irregular::cli::run(std::env::args_os()));
}
