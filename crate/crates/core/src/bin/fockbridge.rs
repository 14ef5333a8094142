fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(fockbridge::cli::run(&args));
}
