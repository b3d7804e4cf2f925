//! `ablate-ci`: randomized-ablation feature importance with confidence
//! intervals for every feature of a CSV dataset.

mod args;

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use ablate_core::io::{write_coverage, write_result};
use ablate_core::pipeline::{run, run_coverage};
use ablate_core::Error;
use clap::Parser;

use crate::args::Args;

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            // usage errors are user errors (exit 1); --help and --version succeed
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ablate-ci: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_model_contract() {
        2
    } else {
        1
    }
}

fn execute(args: &Args) -> Result<(), Error> {
    let config = args.to_config()?;
    let format = args.format;
    let mut buf = Vec::new();
    match args.coverage {
        Some(replicates) => write_coverage(&run_coverage::<f64>(&config, replicates)?, format, &mut buf)?,
        None => write_result(&run::<f64>(&config)?, format, &mut buf)?,
    }
    match &args.out {
        Some(path) => write_atomically(path, &buf),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(&buf)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Writes via a sibling temp file so a failed run never leaves partial output.
fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}
