use std::process::ExitCode;

use multispec::cli::{dispatch, Outcome};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    match dispatch(&argv) {
        Outcome::Report(report, code) => {
            let text = report.to_json_pretty();
            println!("{text}");
            if let Some(path) = &report.config.output {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("failed to write report to {path}: {e}");
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(code as u8)
        }
        Outcome::Info(msg) => {
            println!("{msg}");
            ExitCode::SUCCESS
        }
        Outcome::Usage(msg) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
