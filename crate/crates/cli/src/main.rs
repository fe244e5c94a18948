use std::process::ExitCode;

use clap::Parser;
use wblow_cli::args::{Cli, Invocation};
use wblow_cli::{parse_max_enum, run, run_batch, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = Format::from(cli.format);
    if let Ok(value) = std::env::var("WBLOW_MAX_ENUM") {
        match parse_max_enum(&value) {
            Ok(cap) => wblow_core::limits::set_max_enum(cap),
            Err(message) => {
                eprintln!("error: {message}");
                return ExitCode::from(1);
            }
        }
    }
    let (rendered, code, error) = match cli.invocation() {
        Invocation::Single(spec) => {
            let report = run(&spec);
            let error = report.error.as_ref().map(|e| format!("error [{}]: {}", e.kind, e.message));
            (report.render(format), report.exit_code, error)
        }
        Invocation::Batch(path) => {
            let report = run_batch(&path);
            let error = report.error.as_ref().map(|e| format!("error [{}]: {}", e.kind, e.message));
            (report.render(format), report.exit_code, error)
        }
    };
    match (format, error) {
        (Format::Text, Some(message)) => eprintln!("{message}"),
        (Format::Json, Some(message)) => {
            eprintln!("{message}");
            println!("{rendered}");
        }
        (_, None) => println!("{rendered}"),
    }
    ExitCode::from(code as u8)
}
