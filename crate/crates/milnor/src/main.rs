fn main() {
    if let Err(e) = milnor::cli::run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
