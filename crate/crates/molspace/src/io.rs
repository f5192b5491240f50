//! Shared helpers for the TSV-with-`#`-comments file formats used by the
//! loaders. Every load error names the file and the 1-based line it came
//! from so the CLI can surface a single-line diagnostic.

use std::fmt;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {cause}")]
    Io { path: String, cause: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Data {
        path: String,
        line: usize,
        message: String,
    },
}

impl LoadError {
    pub fn io(path: &Path, cause: std::io::Error) -> Self {
        LoadError::Io {
            path: path.display().to_string(),
            cause,
        }
    }

    pub fn data(path: &Path, line: usize, message: impl fmt::Display) -> Self {
        LoadError::Data {
            path: path.display().to_string(),
            line,
            message: message.to_string(),
        }
    }
}

/// Iterate the payload lines of a TSV file: strips `\r`, skips blank
/// lines and `#` comment lines, and yields `(line_number, line)`.
pub fn payload_lines(contents: &str) -> impl Iterator<Item = (usize, &str)> {
    contents
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.strip_suffix('\r').unwrap_or(line)))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

/// Header lines are `#`-prefixed `key=value` pairs separated by spaces,
/// e.g. `#width=2048 radius=2`. Returns the pairs of the first line when
/// it is a comment, in file order.
pub fn header_pairs(contents: &str) -> Vec<(String, String)> {
    let Some(first) = contents.lines().next() else {
        return Vec::new();
    };
    let Some(rest) = first.strip_prefix('#') else {
        return Vec::new();
    };
    rest.split_whitespace()
        .filter_map(|tok| tok.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}
