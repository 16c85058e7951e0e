pub mod demo;
pub mod scan;
pub mod session;
pub mod verify;

use std::io::Write;
use std::path::Path;

use crate::error::CliError;

/// Writes `content` to `out`, or to stdout when no path is given.
pub fn emit(content: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

pub fn ket(index: usize, bits: usize) -> String {
    format!("|{index:0bits$b}>")
}
