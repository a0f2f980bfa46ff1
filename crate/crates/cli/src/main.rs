use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use dynphase_cli::{run, Cli};

fn write(path: &std::path::Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = out
                .files
                .iter()
                .try_for_each(|(path, text)| write(path, text))
                .and_then(|()| match &cli.global.output {
                    Some(path) => write(path, &out.text),
                    None => std::io::stdout()
                        .write_all(out.text.as_bytes())
                        .map_err(|e| format!("cannot write stdout: {e}")),
                });
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(out.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
