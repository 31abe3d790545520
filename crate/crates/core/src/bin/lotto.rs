use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = lotto_precommit::cli::run(
        std::env::args().collect(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
