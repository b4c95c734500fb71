use std::process::ExitCode;

use antiratio_cli::output::RunContext;
use antiratio_cli::{exit_code, run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = RunContext::new(std::env::args().collect());
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &ctx, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
