fn main() {
    std::process::exit(multifact::cli::main());
}
