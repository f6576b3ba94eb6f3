use std::process::ExitCode;

use oexp_cli::{execute, Failure};

fn main() -> ExitCode {
    match execute(std::env::args_os()) {
        Ok(output) => {
            let written = match &output.out {
                Some(path) => std::fs::write(path, &output.csv)
                    .map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", output.csv);
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(failure) => {
            let code = match &failure {
                // --help and --version arrive as "errors" that go to stdout.
                Failure::Usage(e) if !e.use_stderr() => 0,
                _ => failure.exit_code(),
            };
            match &failure {
                Failure::Usage(e) => {
                    let _ = e.print();
                }
                Failure::Run(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(code)
        }
    }
}
