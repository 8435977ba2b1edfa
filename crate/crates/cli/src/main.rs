use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, stdout, stderr) = crcoh::run_args(std::env::args_os());
    if !stdout.is_empty() && std::io::stdout().write_all(stdout.as_bytes()).is_err() {
        return ExitCode::from(crcoh::EXIT_IO as u8);
    }
    if !stderr.is_empty() {
        let _ = std::io::stderr().write_all(stderr.as_bytes());
    }
    ExitCode::from(code as u8)
}
