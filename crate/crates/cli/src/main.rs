use std::process::ExitCode;

use clap::Parser;
use parkstat::{run, Cli, EXIT_RESOURCE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let written = match &cli.common.out {
                Some(path) => std::fs::write(path, &outcome.output),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(outcome.output.as_bytes())
                }
            };
            if let Err(e) = written {
                eprintln!("parkstat: cannot write output: {e}");
                return ExitCode::from(EXIT_RESOURCE as u8);
            }
            if outcome.code != 0 && cli.common.out.is_some() {
                eprint!("{}", outcome.output);
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(f) => {
            eprintln!("parkstat: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
