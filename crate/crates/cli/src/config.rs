//! `key = value` configuration files. Keys use the long flag names, with
//! `-` and `_` interchangeable; `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, (String, usize)>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_")
}

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Data(format!("config line {}: expected 'key = value'", idx + 1))
            })?;
            values.insert(normalize(k), (v.trim().to_string(), idx + 1));
        }
        Ok(Self { values })
    }

    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }

    /// Value for `key` parsed as `T`, if present.
    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.values.get(&normalize(key)) {
            None => Ok(None),
            Some((v, line)) => v.parse().map(Some).map_err(|_| {
                CliError::Data(format!("config line {line}: cannot parse '{v}' for '{key}'"))
            }),
        }
    }

    /// CLI value, else config value, else `default`.
    pub fn pick<T: FromStr>(&self, cli: Option<T>, key: &str, default: T) -> CliResult<T> {
        Ok(match cli {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(default),
        })
    }

    /// CLI value, else config value.
    pub fn pick_opt<T: FromStr>(&self, cli: Option<T>, key: &str) -> CliResult<Option<T>> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}
