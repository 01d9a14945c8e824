fn main() {
    std::process::exit(euler_adic::cli::run(std::env::args_os()));
}
