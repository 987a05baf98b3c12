use std::process::ExitCode;

use cetcs_cli::{run, Cli, RunConfig};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match RunConfig::from_cli(cli).and_then(|cfg| run(&cfg)) {
        Ok(out) => {
            print!("{}", out.output);
            ExitCode::from(out.status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
