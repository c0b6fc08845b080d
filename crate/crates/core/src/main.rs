fn main() {
    let mut out = std::io::stdout();
    std::process::exit(schmidt::cli::run(std::env::args_os(), &mut out));
}
