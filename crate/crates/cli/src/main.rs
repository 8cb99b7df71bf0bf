use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use padic_tnf_cli::{run, RunConfig, Status};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Usage as u8 } else { 0 });
        }
    };
    let start = Instant::now();
    let outcome = match run(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("padic-tnf: {e}");
            return ExitCode::from(e.status as u8);
        }
    };
    if config.verbose > 0 {
        eprintln!("padic-tnf: {:?} finished in {:.3?}", config.mode, start.elapsed());
    }
    match &config.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.text) {
                eprintln!("padic-tnf: cannot write {}: {e}", path.display());
                return ExitCode::from(Status::Failure as u8);
            }
        }
        None => print!("{}", outcome.text),
    }
    match outcome.status {
        Status::NoSolutions => eprintln!("padic-tnf: no Q_p-rational solutions"),
        Status::IllConditioned => eprintln!("padic-tnf: precision warnings present (--strict)"),
        _ => {}
    }
    ExitCode::from(outcome.status as u8)
}
