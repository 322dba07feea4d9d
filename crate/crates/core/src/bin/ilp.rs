fn main() {
    std::process::exit(intrinsic_lp::cli::main_with_args(std::env::args_os()));
}
