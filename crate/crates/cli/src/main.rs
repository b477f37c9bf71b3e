use std::io;
use std::process::ExitCode;

use clap::Parser;

use qnetmax_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = run(&cli, &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code as u8)
}
