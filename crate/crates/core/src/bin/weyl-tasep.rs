fn main() {
    std::process::exit(weyl_tasep::cli::main());
}
