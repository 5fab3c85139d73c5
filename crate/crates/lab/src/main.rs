fn main() {
    std::process::exit(orbitope_lab::run(std::env::args_os()));
}
