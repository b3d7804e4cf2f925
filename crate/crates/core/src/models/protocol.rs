//! Line protocol spoken with external model processes over stdin/stdout.
//!
//! ```text
//! engine → child   HELLO <M>
//! child  → engine  READY
//! engine → child   BATCH <n>
//! engine → child   n lines of M space-separated numbers
//! child  → engine  n lines, one prediction each
//! ```
//!
//! Numbers are written as the shortest decimal that round-trips, with `.` as
//! the decimal separator. Every line ends with a single `\n`. A child line
//! starting with `ERR ` aborts the run. Closing the child's stdin asks it to
//! exit with status 0.

use std::fmt::Write as _;

use ndarray::ArrayView2;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const READY: &str = "READY";
pub const ERR_PREFIX: &str = "ERR ";

pub fn hello_line(n_features: usize) -> String {
    format!("HELLO {n_features}\n")
}

/// Header plus one line per row.
pub fn encode_batch<T: Scalar>(rows: ArrayView2<'_, T>) -> String {
    let mut out = format!("BATCH {}\n", rows.nrows());
    for row in rows.rows() {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{v}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

/// Parses one response line into a prediction.
pub fn decode_prediction<T: Scalar>(line: &str) -> Result<T> {
    if let Some(message) = line.strip_prefix(ERR_PREFIX) {
        return Err(Error::ModelContract(format!("model reported error: {message}")));
    }
    line.parse::<T>()
        .map_err(|_| Error::ModelContract(format!("malformed prediction line {line:?}")))
}
