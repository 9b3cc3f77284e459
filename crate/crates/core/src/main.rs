fn main() {
    let code = helium_resonator::cli::main_with_stdio(std::env::args_os());
    std::process::exit(code);
}
