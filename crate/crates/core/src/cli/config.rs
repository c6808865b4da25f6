//! Flat `key = value` configuration files.
//!
//! Keys are the long flag names without leading dashes (`N`, `a2`, `a-min`,
//! ...). Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;

pub const KNOWN_KEYS: [&str; 16] = [
    "N", "a2", "pr", "method", "K", "resolution", "out", "format", "a-min", "a-max", "samples", "n-min", "n-max",
    "n-samples", "methods", "plot",
];

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value, got `{line}`", lineno + 1))?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(format!("config line {}: unknown key `{key}`", lineno + 1));
        }
        if map.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(format!("config line {}: duplicate key `{key}`", lineno + 1));
        }
    }
    Ok(map)
}
