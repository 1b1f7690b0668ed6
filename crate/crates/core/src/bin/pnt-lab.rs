fn main() {
    let code = pnt_lab::cli::run(std::env::args_os());
    std::process::exit(code);
}
