use std::io::{self, BufWriter};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdin = io::stdin();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut err = io::stderr();
    let status = hyperpath_cli::run(std::env::args_os(), &mut stdin.lock(), &mut out, &mut err);
    ExitCode::from(status as u8)
}
