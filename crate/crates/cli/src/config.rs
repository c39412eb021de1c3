//! Flat `key = value` config files with `#` comments.

use anyhow::{bail, Result};

/// Parses the line-oriented format, reporting offending line numbers.
pub fn parse_kv(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {lineno}: expected `key = value`, got {raw:?}");
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            bail!("line {lineno}: empty key or value");
        }
        out.push((lineno, key.to_string(), value.to_string()));
    }
    Ok(out)
}

pub fn parse_value<T: std::str::FromStr>(lineno: usize, key: &str, value: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| anyhow::anyhow!("line {lineno}: cannot parse {key} = {value:?}"))
}
