//! CSV and JSON writers. Non-finite floats are written as `"inf"`,
//! `"-inf"` or `"nan"` in both formats.

use std::io::Write;
use std::path::Path;

use serde::{Serialize, Serializer};

use crate::config::Format;
use crate::CliError;

pub fn float<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

pub fn opt_float<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => float(v, s),
        None => s.serialize_none(),
    }
}

fn io_error(e: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("cannot write output: {e}"))
}

pub fn render<T: Serialize>(rows: &[T], format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(io_error)?;
            }
            w.into_inner().map_err(io_error)
        }
        Format::Json => {
            let mut buf = serde_json::to_vec_pretty(rows).map_err(io_error)?;
            buf.push(b'\n');
            Ok(buf)
        }
    }
}

/// Writes to `path`, or to standard output when no path is given.
pub fn emit<T: Serialize>(rows: &[T], format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let bytes = render(rows, format)?;
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(io_error),
        None => std::io::stdout().write_all(&bytes).map_err(io_error),
    }
}
