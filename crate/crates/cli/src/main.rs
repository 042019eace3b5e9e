use std::process::ExitCode;

use clap::Parser;
use fibnest_cli::{run, Cli, EXIT_USAGE, PRECISION_ENV};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let env = std::env::var(PRECISION_ENV).ok();
    let mut stdout = std::io::stdout().lock();
    match run(&cli, env, &mut stdout) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = e.exit_code();
            eprintln!("{:#}", anyhow::Error::new(e).context("fibnest failed"));
            ExitCode::from(code)
        }
    }
}
