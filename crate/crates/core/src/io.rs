//! Plain-text instance format.
//!
//! ```text
//! # optional comment lines, anywhere
//! n W
//! w_1 s_1 t_1
//! ...
//! w_n s_n t_n
//! ```
//!
//! A comment of the form `# name: <label>` sets the instance name.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::instance::{Instance, InstanceError, Item};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: InstanceError,
    },
    #[error("expected {expected} items, found {found}")]
    ItemCount { expected: usize, found: usize },
    #[error("missing header line `n W`")]
    MissingHeader,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn fields<const N: usize>(text: &str, line: usize) -> Result<[u32; N], ParseError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != N {
        return Err(ParseError::Malformed {
            line,
            message: format!("expected {N} integers, found {}", parts.len()),
        });
    }
    let mut out = [0u32; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part.parse().map_err(|_| ParseError::Malformed {
            line,
            message: format!("'{part}' is not a non-negative integer"),
        })?;
    }
    Ok(out)
}

/// Parses an instance; items are re-sorted by start time.
pub fn parse_instance(text: &str, default_name: &str) -> Result<Instance, ParseError> {
    let mut name = default_name.to_string();
    let mut header: Option<(usize, u32)> = None;
    let mut items = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(label) = comment.trim().strip_prefix("name:") {
                name = label.trim().to_string();
            }
            continue;
        }
        match header {
            None => {
                let [n, capacity] = fields::<2>(trimmed, line)?;
                header = Some((n as usize, capacity));
            }
            Some((_, capacity)) => {
                let [weight, start, end] = fields::<3>(trimmed, line)?;
                let index = items.len();
                let problem = if weight == 0 {
                    Some(InstanceError::ZeroWeight { index })
                } else if weight > capacity {
                    Some(InstanceError::WeightExceedsCapacity {
                        index,
                        weight,
                        capacity,
                    })
                } else if start >= end {
                    Some(InstanceError::EmptyWindow { index, start, end })
                } else {
                    None
                };
                if let Some(source) = problem {
                    return Err(ParseError::Invalid { line, source });
                }
                let item = Item::new(weight, start, end);
                items.push(item);
            }
        }
    }

    let (n, capacity) = header.ok_or(ParseError::MissingHeader)?;
    if items.len() != n {
        return Err(ParseError::ItemCount {
            expected: n,
            found: items.len(),
        });
    }
    Instance::new(name, capacity, items).map_err(|source| ParseError::Invalid { line: 1, source })
}

pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::new();
    if !instance.name().is_empty() {
        let _ = writeln!(out, "# name: {}", instance.name());
    }
    let _ = writeln!(out, "{} {}", instance.len(), instance.capacity());
    for item in instance.items() {
        let _ = writeln!(out, "{} {} {}", item.weight, item.start, item.end);
    }
    out
}

/// Reads an instance file, naming it after the file stem unless the file
/// carries a `# name:` comment.
pub fn read_instance_file(path: &Path) -> Result<Instance, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_instance(&text, &stem)
}

pub fn write_instance_file(path: &Path, instance: &Instance) -> Result<(), ParseError> {
    std::fs::write(path, write_instance(instance)).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })
}
