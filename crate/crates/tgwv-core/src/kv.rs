//! Parser for the flat `key = value` text format used by detector configs
//! and scene scenarios. One assignment per line, `#` starts a comment,
//! blank lines are ignored, duplicate keys are rejected.

use alloc::borrow::ToOwned;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Splits `text` into (key, value) pairs in file order.
pub(crate) fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: i + 1,
                message: "expected `key = value`".to_string(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(Error::Parse { line: i + 1, message: "empty key".to_string() });
        }
        if value.is_empty() {
            return Err(Error::Parse { line: i + 1, message: "empty value".to_string() });
        }
        if pairs.iter().any(|(existing, _)| existing == key) {
            return Err(Error::Config {
                key: key.to_owned(),
                message: "duplicate key".to_string(),
            });
        }
        pairs.push((key.to_owned(), value.to_owned()));
    }
    Ok(pairs)
}

pub(crate) fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value.parse().map_err(|_| Error::Config {
        key: key.to_owned(),
        message: alloc::format!("expected a number, got `{value}`"),
    })
}

pub(crate) fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value.parse().map_err(|_| Error::Config {
        key: key.to_owned(),
        message: alloc::format!("expected a non-negative integer, got `{value}`"),
    })
}

pub(crate) fn parse_u64(key: &str, value: &str) -> Result<u64> {
    value.parse().map_err(|_| Error::Config {
        key: key.to_owned(),
        message: alloc::format!("expected a non-negative integer, got `{value}`"),
    })
}

pub(crate) fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Config {
            key: key.to_owned(),
            message: alloc::format!("expected `true` or `false`, got `{value}`"),
        }),
    }
}
