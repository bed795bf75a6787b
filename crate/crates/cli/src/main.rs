use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use posicert_cli::{execute, output_path, write_atomic, Cli, EXIT_INPUT, EXIT_OK};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let result = execute(&cli.command);
    if let Some(msg) = &result.diagnostic {
        eprintln!("posicert: {msg}");
    }
    if let Some(doc) = &result.document {
        let json = doc.to_json();
        let mut out = std::io::stdout().lock();
        // A closed pipe downstream is not our failure.
        let _ = writeln!(out, "{json}").and_then(|_| out.flush());
        if let Some(path) = output_path(&cli.command) {
            if let Err(e) = write_atomic(path, &format!("{json}\n")) {
                eprintln!("posicert: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
    }
    ExitCode::from(result.code as u8)
}
