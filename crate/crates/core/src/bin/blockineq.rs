fn main() {
    std::process::exit(blockineq::harness::cli_main(std::env::args_os()));
}
