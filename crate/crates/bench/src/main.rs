fn main() {
    std::process::exit(slidedup_bench::cli::main_with(std::env::args_os()));
}
