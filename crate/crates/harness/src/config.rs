//! `key = value` run configuration files.

use std::path::Path;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigEntry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped;
/// keys use the long option names (`cells`, `cfl`, `c-sound`, ...), with
/// underscores accepted for dashes.
pub fn parse_config(text: &str) -> Result<Vec<ConfigEntry>> {
    let mut out: Vec<ConfigEntry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| HarnessError::Config { line: i + 1, msg: msg.to_string() };
        let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value"))?;
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(err("empty key or value"));
        }
        if out.iter().any(|e| e.key == key) {
            return Err(err(&format!("duplicate key '{key}'")));
        }
        out.push(ConfigEntry { line: i + 1, key, value: value.to_string() });
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<Vec<ConfigEntry>> {
    parse_config(&std::fs::read_to_string(path)?)
}
