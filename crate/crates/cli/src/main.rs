use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use entgame_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match entgame_cli::run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            if !out.text.ends_with('\n') {
                let _ = stdout.write_all(b"\n");
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
