fn main() {
    std::process::exit(c2lab::cli::main());
}
