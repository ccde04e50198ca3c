use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = projconn_cli::run(std::env::args_os(), &mut io::stdin().lock());
    print!("{}", outcome.output);
    ExitCode::from(outcome.code)
}
