//! Plain-text `key=value` configuration with `#` comments.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct KvConfig {
    entries: BTreeMap<String, String>,
}

impl KvConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value, got {raw:?}", lineno + 1)))?;
            let k = k.trim();
            if k.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
            }
            entries.insert(k.to_string(), v.trim().to_string());
        }
        Ok(KvConfig { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|v| v.parse::<f64>().map_err(|e| Error::Config(format!("{key}={v}: {e}"))))
            .transpose()
    }

    pub fn set(&mut self, key: &str, value: impl fmt::Display) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

impl fmt::Display for KvConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_comments() {
        let c = KvConfig::parse("# header\nalpha = 2\n\nbeta=1.5 # trailing\nsignal=cauchy\n").unwrap();
        assert_eq!(c.get_f64("alpha").unwrap(), Some(2.0));
        assert_eq!(c.get_f64("beta").unwrap(), Some(1.5));
        assert_eq!(c.get("signal"), Some("cauchy"));
        assert_eq!(c.get_f64("missing").unwrap(), None);
        assert!(c.get_f64("signal").is_err());
        assert!(KvConfig::parse("novalue").is_err());
        assert!(KvConfig::parse("=3").is_err());
    }

    #[test]
    fn display_round_trip() {
        let mut c = KvConfig::default();
        c.set("b", 0.1);
        c.set("a", "x");
        assert_eq!(KvConfig::parse(&c.to_string()).unwrap(), c);
    }
}
