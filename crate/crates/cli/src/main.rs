use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use motivic_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    for line in &outcome.diagnostics {
        eprintln!("{line}");
    }
    if !outcome.document.is_empty() {
        let written = match &cli.out {
            Some(path) => std::fs::write(path, &outcome.document),
            None => std::io::stdout()
                .lock()
                .write_all(outcome.document.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(outcome.exit as u8)
}
