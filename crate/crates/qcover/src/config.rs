//! Flat `key = value` configuration files.
//!
//! One setting per line, `#` starts a comment, blank lines are skipped. Keys
//! are the long CLI flag names without dashes; `mmd-samples` and `mmd_samples`
//! are the same key. Values given on the command line win over the file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

fn normalize_key(key: &str) -> String {
    key.trim().replace('_', "-").to_ascii_lowercase()
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: i + 1,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = normalize_key(key);
            if key.is_empty() {
                return Err(Error::Config {
                    line: i + 1,
                    msg: "empty key".into(),
                });
            }
            if values.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(Error::Config {
                    line: i + 1,
                    msg: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(&normalize_key(key)).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    /// `cli` if given, else the parsed file value, else `default`.
    pub fn resolve<T>(&self, key: &str, cli: Option<T>, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if let Some(v) = cli {
            return Ok(v);
        }
        match self.get(key) {
            Some(raw) => raw.parse().map_err(|e: T::Err| Error::Value {
                key: key.to_string(),
                msg: e.to_string(),
            }),
            None => Ok(default),
        }
    }

    /// Like [`ConfigFile::resolve`] for comma-separated lists.
    pub fn resolve_list<T>(&self, key: &str, cli: Option<Vec<T>>, default: Vec<T>) -> Result<Vec<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if let Some(v) = cli {
            return Ok(v);
        }
        match self.get(key) {
            Some(raw) => raw
                .split(',')
                .map(|s| {
                    s.trim().parse().map_err(|e: T::Err| Error::Value {
                        key: key.to_string(),
                        msg: e.to_string(),
                    })
                })
                .collect(),
            None => Ok(default),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_resolves() {
        let cfg = ConfigFile::parse("# run\nqubits = 5\nmmd_samples=40 # small\n\nseed= 9\n").unwrap();
        assert_eq!(cfg.get("mmd-samples"), Some("40"));
        assert_eq!(cfg.resolve::<usize>("qubits", None, 6).unwrap(), 5);
        assert_eq!(cfg.resolve::<usize>("qubits", Some(7), 6).unwrap(), 7);
        assert_eq!(cfg.resolve::<usize>("samples", None, 100).unwrap(), 100);
        assert_eq!(cfg.resolve::<u64>("seed", None, 0).unwrap(), 9);
    }

    #[test]
    fn lists() {
        let cfg = ConfigFile::parse("qubits = 3, 5,7").unwrap();
        assert_eq!(cfg.resolve_list::<usize>("qubits", None, vec![]).unwrap(), [3, 5, 7]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match ConfigFile::parse("a = 1\nnonsense\n") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(ConfigFile::parse("a = 1\na = 2").is_err());
        let cfg = ConfigFile::parse("qubits = five").unwrap();
        assert!(cfg.resolve::<usize>("qubits", None, 1).is_err());
    }
}
