use std::process::ExitCode;

use clap::Parser;
use pareto_rank::cli::{run, Cli};
use pareto_rank::ErrorClass;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { ErrorClass::Usage.exit_code() } else { 0 };
            let _ = err.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let class = err.class();
            eprintln!("error ({}): {err}", format!("{class:?}").to_lowercase());
            ExitCode::from(class.exit_code() as u8)
        }
    }
}
