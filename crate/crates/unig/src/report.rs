//! Canonical JSON emission. Reports route through `serde_json::Value`,
//! whose object representation sorts keys, and end with a newline, so two
//! equal runs produce byte-identical output.

use std::fs;
use std::path::Path;

use serde_json::Value;

use crate::error::CliError;

pub fn canonical_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

/// Writes the report to `out` when given, otherwise prints it to stdout.
pub fn emit(value: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let text = canonical_json(value);
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::WriteFile {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
