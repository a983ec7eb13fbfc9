use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use forge_cli::{allows_skips, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            eprintln!("{}", out.summary);
            ExitCode::from(out.exit_code(allows_skips(&cli)))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
