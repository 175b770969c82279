fn main() {
    std::process::exit(seqbench::cli::main_with_args(std::env::args_os()));
}
