fn main() {
    std::process::exit(vortexem::cli::run(std::env::args_os()));
}
