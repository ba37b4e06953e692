//! Flat `key = value` configuration files (`#` starts a comment) plus the
//! resolution rule: command-line flags override file values, file values
//! override built-in defaults.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::failure::{CliFailure, CliResult};

#[derive(Debug, Clone, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliFailure::Data(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliFailure::Usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let stripped = match line.find('#') {
                Some(pos) => &line[..pos],
                None => line,
            };
            let trimmed = stripped.trim();
            if trimmed.is_empty() {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", idx + 1))?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn raw(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    /// Flag value if given, else config-file value, else the default.
    pub fn resolve<T>(&self, key: &str, flag: Option<T>, default: T) -> CliResult<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(raw) => raw.parse().map_err(|e| {
                CliFailure::Usage(format!("config key `{key}` = {raw:?} is invalid: {e}"))
            }),
            None => Ok(default),
        }
    }

    /// Canonical text used for the provenance digest: sorted `key = value`
    /// lines.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.values {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}

/// Comma-separated list parser for flags such as `--horizons 6,12,24`.
pub fn parse_list<T>(text: &str, what: &str) -> CliResult<Vec<T>>
where
    T: FromStr,
    T::Err: Display,
{
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|e| CliFailure::Usage(format!("invalid {what} entry {s:?}: {e}")))
        })
        .collect()
}
