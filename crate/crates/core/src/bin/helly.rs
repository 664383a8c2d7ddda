use clap::Parser;
use geohelly::cli::{exit_code, init_threads, run, RunConfig};

fn main() {
    init_threads();
    let config = RunConfig::parse();
    let code = match run(&config, &mut std::io::stdout().lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("helly: {e}");
            exit_code(&e)
        }
    };
    std::process::exit(code);
}
