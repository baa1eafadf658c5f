fn main() {
    std::process::exit(coordsim_cli::run(std::env::args_os()));
}
