fn main() {
    std::process::exit(enstrophy_lab::cli::main_with_args(std::env::args_os()));
}
