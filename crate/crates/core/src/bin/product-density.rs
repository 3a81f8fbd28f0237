fn main() {
    std::process::exit(product_density::cli::run(std::env::args_os()));
}
