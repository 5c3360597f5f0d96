use clap::Parser;
use triplekit::cli::{self, Cli};

fn main() {
    let parsed = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { cli::EXIT_INPUT } else { cli::EXIT_PASS };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    cli::init_threads();
    let outcome = cli::run(&parsed);
    print!("{}", outcome.stdout(parsed.pretty));
    std::process::exit(outcome.code);
}
