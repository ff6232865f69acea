use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = gradus::cli::run_command(std::env::args().skip(1));
    if let Some(message) = &out.diagnostic {
        eprintln!("{}", message.trim_end());
    }
    // a closed pipe only loses output; the exit code still carries the verdict
    let _ = writeln!(std::io::stdout().lock(), "{}", out.text.trim_end());
    ExitCode::from(out.code as u8)
}
