fn main() {
    env_logger::init();
    let args: Vec<String> = std::env::args().collect();
    let code = conflab::cli::run(&args, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
