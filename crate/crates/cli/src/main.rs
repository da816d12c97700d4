use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match feedcast_cli::run(std::env::args_os(), &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let message = e.to_string();
            // Argument-parser messages already carry their own prefix.
            if message.starts_with("error:") {
                eprint!("{message}");
            } else {
                eprintln!("error: {message}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
