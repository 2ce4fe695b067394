//! Configuration, sweeps and the `iqisec` command.

pub mod config;
pub mod experiment;
pub mod flags;

use std::fs::File;
use std::io::{self, BufWriter};

pub use config::{load_config, parse_config, ConfigDocument};
pub use experiment::{
    run_experiment, write_csv, ExperimentSpec, Metric, Mode, Row, SweepSpec, SweepVar,
};
pub use flags::Flags;

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_STRICT: i32 = 3;

/// Runs the command for parsed flags and returns the process exit code.
pub fn run(flags: &Flags) -> i32 {
    let doc = match flags.resolve() {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let rows = match run_experiment(&doc) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    if flags.strict {
        if let Some(r) = rows.iter().find(|r| r.is_short_circuit()) {
            eprintln!(
                "error: {} {} at {}={}: {}",
                r.metric, r.scheme, r.sweep_var, r.sweep_value, r.note
            );
            return EXIT_STRICT;
        }
    }
    let written = match doc.output() {
        Some(path) => File::create(path)
            .map_err(Error::from)
            .and_then(|f| write_csv(&rows, BufWriter::new(f))),
        None => write_csv(&rows, io::stdout().lock()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Numeric(_) => EXIT_FAILURE,
        _ => EXIT_CONFIG,
    }
}
