//! Writes a b-file of f(n) through the command-line layer.
//!
//! cargo run --example bfile > f.txt

fn main() {
    let args = ["multifact", "bfile", "f", "--max", "100"];
    let code = multifact::cli::run(args, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
