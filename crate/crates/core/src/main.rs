fn main() {
    std::process::exit(langdiv::cli::main());
}
