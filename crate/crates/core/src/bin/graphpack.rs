fn main() {
    std::process::exit(graphpack::harness::main_with(std::env::args_os()));
}
