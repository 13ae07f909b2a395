fn main() {
    std::process::exit(hypercube_lsi::cli::main_with_args(std::env::args_os()));
}
