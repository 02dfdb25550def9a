use std::io;
use std::process::ExitCode;

use clap::Parser;
use pseudopivot_cli::{run, Cli, Exit};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.use_stderr() {
                true => ExitCode::from(Exit::InputError.code() as u8),
                false => ExitCode::SUCCESS,
            };
        }
    };
    let exit = run(&cli, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(exit.code() as u8)
}
