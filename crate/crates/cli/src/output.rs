use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::Value;

use crate::args::Format;
use crate::UsageError;

/// Writes to `out`, or to stdout when no path is given.
pub fn write_out(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn json_text<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Renders a report in the requested format; `csv` and `table` are only
/// called when selected.
pub fn render<T: serde::Serialize>(
    value: &T,
    format: Format,
    csv: impl FnOnce() -> String,
    table: impl FnOnce() -> String,
) -> Result<String> {
    match format {
        Format::Json => json_text(value),
        Format::Csv => Ok(csv()),
        Format::Table => Ok(table()),
    }
}

/// Rejects an output path that names one of the inputs.
pub fn check_output(out: Option<&Path>, inputs: &[&Path]) -> Result<(), UsageError> {
    let Some(out) = out else { return Ok(()) };
    for input in inputs {
        let same = out == *input
            || matches!(
                (fs::canonicalize(out), fs::canonicalize(input)),
                (Ok(a), Ok(b)) if a == b
            );
        if same {
            return Err(UsageError(format!(
                "output {} is also an input; refusing to overwrite it",
                out.display()
            )));
        }
    }
    Ok(())
}

pub fn parse_delimiter(s: &str) -> Result<u8, UsageError> {
    match s {
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        _ if s.len() == 1 && s.is_ascii() && s != "\n" && s != "\r" => Ok(s.as_bytes()[0]),
        _ => Err(UsageError(format!(
            "delimiter must be one ASCII character or 'tab', got '{s}'"
        ))),
    }
}

/// Two-column table of a flat JSON object.
pub fn key_value_table(value: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = value {
        let width = map.keys().map(String::len).max().unwrap_or(0);
        for (k, v) in map {
            out.push_str(&format!("{k:<width$}  {v}\n"));
        }
    }
    out
}
