fn main() {
    std::process::exit(sdf_dirac::cli::run(std::env::args_os()));
}
