use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = obk::cli::run(std::env::args());
    if result.exit_code == 0 {
        print!("{}", result.report);
    } else {
        let _ = write!(std::io::stderr(), "{}", result.report);
    }
    ExitCode::from(result.exit_code as u8)
}
