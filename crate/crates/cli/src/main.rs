use clap::Parser;
use slspec_cli::{run, Cli};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut output = String::new();
    match run(&cli.command, &mut output) {
        Ok(code) => {
            print!("{output}");
            ExitCode::from(code)
        }
        Err(err) => {
            print!("{output}");
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
