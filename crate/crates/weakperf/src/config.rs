//! Line-oriented experiment configs: `key = value` pairs under
//! `[section]` headers, no nesting. Every key a command reads is checked
//! off; leftovers are rejected so typos fail loudly at parse time.

use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    pub schema_version: u32,
    pub sections: BTreeMap<String, BTreeMap<String, String>>,
}

pub fn parse_config(text: &str) -> Result<RawConfig> {
    let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut current = String::new();
    sections.insert(String::new(), BTreeMap::new());
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| {
                Error::Config(format!("line {}: unterminated section", lineno + 1))
            })?;
            current = name.trim().to_string();
            sections.entry(current.clone()).or_default();
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let prev = sections
            .get_mut(&current)
            .unwrap()
            .insert(k.trim().to_string(), v.trim().to_string());
        if prev.is_some() {
            return Err(Error::Config(format!(
                "line {}: duplicate key `{}`",
                lineno + 1,
                k.trim()
            )));
        }
    }
    let schema_version = match sections
        .get_mut("")
        .and_then(|m| m.remove("schema_version"))
    {
        Some(v) => v
            .parse::<u32>()
            .map_err(|e| Error::Config(format!("bad schema_version: {e}")))?,
        None => SCHEMA_VERSION,
    };
    if schema_version != SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "unsupported schema_version {schema_version}, expected {SCHEMA_VERSION}"
        )));
    }
    Ok(RawConfig {
        schema_version,
        sections,
    })
}

pub fn load_config(path: &std::path::Path) -> Result<RawConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

/// Section reader that tracks key usage and rejects unknown keys.
pub struct SectionReader {
    name: String,
    map: BTreeMap<String, String>,
    used: BTreeSet<String>,
}

impl SectionReader {
    pub fn new(cfg: &RawConfig, name: &str) -> SectionReader {
        SectionReader {
            name: name.to_string(),
            map: cfg.sections.get(name).cloned().unwrap_or_default(),
            used: BTreeSet::new(),
        }
    }

    pub fn get_str(&mut self, key: &str) -> Option<String> {
        self.used.insert(key.to_string());
        self.map.get(key).cloned()
    }

    pub fn get_f64(&mut self, key: &str, range: (f64, f64)) -> Result<Option<f64>> {
        match self.get_str(key) {
            None => Ok(None),
            Some(v) => {
                let x: f64 = v
                    .parse()
                    .map_err(|e| Error::Config(format!("[{}] {key}: {e}", self.name)))?;
                if !(x >= range.0 && x <= range.1) {
                    return Err(Error::Config(format!(
                        "[{}] {key} = {x} outside [{}, {}]",
                        self.name, range.0, range.1
                    )));
                }
                Ok(Some(x))
            }
        }
    }

    pub fn get_u64(&mut self, key: &str, range: (u64, u64)) -> Result<Option<u64>> {
        match self.get_str(key) {
            None => Ok(None),
            Some(v) => {
                let x: u64 = v
                    .parse()
                    .map_err(|e| Error::Config(format!("[{}] {key}: {e}", self.name)))?;
                if !(x >= range.0 && x <= range.1) {
                    return Err(Error::Config(format!(
                        "[{}] {key} = {x} outside [{}, {}]",
                        self.name, range.0, range.1
                    )));
                }
                Ok(Some(x))
            }
        }
    }

    pub fn get_bool(&mut self, key: &str) -> Result<Option<bool>> {
        match self.get_str(key) {
            None => Ok(None),
            Some(v) => match v.as_str() {
                "true" | "1" | "yes" => Ok(Some(true)),
                "false" | "0" | "no" => Ok(Some(false)),
                other => Err(Error::Config(format!(
                    "[{}] {key}: expected boolean, got `{other}`",
                    self.name
                ))),
            },
        }
    }

    /// Errors on any key that was present but never read.
    pub fn finish(self) -> Result<()> {
        let unknown: Vec<&String> = self
            .map
            .keys()
            .filter(|k| !self.used.contains(*k))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "[{}] unknown keys: {}",
                self.name,
                unknown
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_schema() {
        let cfg = parse_config("schema_version = 1\n[gen]\nl0 = 0.1\ndepth = 6\n").unwrap();
        assert_eq!(cfg.schema_version, 1);
        let mut rd = SectionReader::new(&cfg, "gen");
        assert_eq!(rd.get_f64("l0", (0.0, 1.0)).unwrap(), Some(0.1));
        assert_eq!(rd.get_u64("depth", (0, 60)).unwrap(), Some(6));
        rd.finish().unwrap();
    }

    #[test]
    fn rejects_unknown_keys_and_ranges() {
        let cfg = parse_config("[gen]\nl0 = 0.1\nbogus = 7\n").unwrap();
        let mut rd = SectionReader::new(&cfg, "gen");
        let _ = rd.get_f64("l0", (0.0, 1.0)).unwrap();
        assert!(rd.finish().is_err());

        let cfg = parse_config("[gen]\ndepth = 99\n").unwrap();
        let mut rd = SectionReader::new(&cfg, "gen");
        assert!(rd.get_u64("depth", (0, 60)).is_err());
    }

    #[test]
    fn rejects_bad_schema_and_duplicates() {
        assert!(parse_config("schema_version = 2\n").is_err());
        assert!(parse_config("[a]\nx = 1\nx = 2\n").is_err());
    }
}
