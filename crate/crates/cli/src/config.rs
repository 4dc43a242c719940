//! Flat `key = value` run configuration.
//!
//! Values come from an optional config file and from command-line flags,
//! flags winning. Every value a command reads is recorded, with defaults
//! filled in, and written next to the results.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

/// Keys accepted in config files and as `--key` flags.
pub const KEYS: &[&str] = &[
    "model", "k", "n", "jext", "L", "LA", "J", "lambda", "Lambda", "s", "f", "parity", "case", "seed", "samples",
    "window", "mode", "poisson", "out", "plot",
];

/// Keys that only steer where output goes and never appear in the
/// resolved config.
const UNRECORDED: &[&str] = &["out", "plot"];

#[derive(Debug, Default)]
pub struct Params {
    file: BTreeMap<String, String>,
    flags: BTreeMap<String, String>,
    used: BTreeSet<String>,
    resolved: BTreeMap<String, String>,
}

impl Params {
    pub fn new(file: Option<&Path>, flags: Vec<(&'static str, String)>) -> Result<Params> {
        let mut p = Params::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
            p.file = parse_config(&text).with_context(|| format!("in config {}", path.display()))?;
        }
        p.flags = flags.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        Ok(p)
    }

    fn raw(&mut self, key: &str) -> Option<String> {
        debug_assert!(KEYS.contains(&key), "unregistered key {key}");
        self.used.insert(key.to_string());
        self.flags.get(key).or_else(|| self.file.get(key)).cloned()
    }

    fn record(&mut self, key: &str, value: String) {
        if !UNRECORDED.contains(&key) {
            self.resolved.insert(key.to_string(), value);
        }
    }

    pub fn text(&mut self, key: &str) -> Option<String> {
        let v = self.raw(key)?;
        self.record(key, v.clone());
        Some(v)
    }

    pub fn text_or(&mut self, key: &str, default: &str) -> String {
        let v = self.raw(key).unwrap_or_else(|| default.to_string());
        self.record(key, v.clone());
        v
    }

    pub fn opt<T: FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => {
                let parsed = v.trim().parse::<T>().map_err(|e| anyhow!("invalid value '{v}' for {key}: {e}"))?;
                self.record(key, v.trim().to_string());
                Ok(Some(parsed))
            }
        }
    }

    pub fn required<T: FromStr>(&mut self, key: &str) -> Result<T>
    where
        T::Err: Display,
    {
        self.opt(key)?.ok_or_else(|| anyhow!("missing required value: {key}"))
    }

    pub fn or<T: FromStr + Display>(&mut self, key: &str, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        match self.opt(key)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, default.to_string());
                Ok(default)
            }
        }
    }

    /// Integer list such as `1,2,5`, `1:8` (inclusive) or `8:20:2`.
    pub fn usize_list(&mut self, key: &str, default: impl FnOnce() -> Vec<usize>) -> Result<Vec<usize>> {
        match self.raw(key) {
            Some(v) => {
                let list = parse_usize_list(&v).with_context(|| format!("in {key}"))?;
                self.record(key, v.trim().to_string());
                Ok(list)
            }
            None => {
                let list = default();
                self.record(key, list.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
                Ok(list)
            }
        }
    }

    pub fn opt_usize_list(&mut self, key: &str) -> Result<Option<Vec<usize>>> {
        match self.raw(key) {
            Some(v) => {
                let list = parse_usize_list(&v).with_context(|| format!("in {key}"))?;
                self.record(key, v.trim().to_string());
                Ok(Some(list))
            }
            None => Ok(None),
        }
    }

    pub fn required_usize_list(&mut self, key: &str) -> Result<Vec<usize>> {
        if self.flags.contains_key(key) || self.file.contains_key(key) {
            self.usize_list(key, Vec::new)
        } else {
            self.used.insert(key.to_string());
            bail!("missing required value: {key}")
        }
    }

    /// Real list such as `0.1,0.5` or `-4:4:0.5` (inclusive).
    pub fn f64_list(&mut self, key: &str, default: &str) -> Result<Vec<f64>> {
        let v = self.raw(key).unwrap_or_else(|| default.to_string());
        let list = parse_f64_list(&v).with_context(|| format!("in {key}"))?;
        self.record(key, v.trim().to_string());
        Ok(list)
    }

    /// Treat `key = value` as if it had been given on the command line.
    pub fn set_flag(&mut self, key: &str, value: &str) {
        self.flags.insert(key.to_string(), value.to_string());
    }

    /// Fail if a command-line flag was given that the command does not read.
    /// Config-file keys may be shared between commands and are not checked.
    pub fn seal(&self) -> Result<()> {
        let unused: Vec<String> =
            self.flags.keys().filter(|k| !self.used.contains(*k)).map(|k| format!("--{k}")).collect();
        if unused.is_empty() {
            Ok(())
        } else {
            bail!("not used by this command: {}", unused.join(", "))
        }
    }

    pub fn resolved_text(&self) -> String {
        self.resolved.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected key = value", no + 1))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) && k != "threads" {
            bail!("line {}: unknown key '{k}'", no + 1);
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            bail!("line {}: duplicate key '{k}'", no + 1);
        }
    }
    Ok(out)
}

/// The `threads` entry of a config file, if any.
pub fn file_threads(path: &Path) -> Result<Option<usize>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    match parse_config(&text)?.get("threads") {
        None => Ok(None),
        Some(v) => Ok(Some(v.parse().map_err(|e| anyhow!("invalid threads '{v}': {e}"))?)),
    }
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let fields: Vec<&str> = part.split(':').map(str::trim).collect();
        let num = |s: &str| s.parse::<usize>().map_err(|e| anyhow!("bad integer '{s}': {e}"));
        match fields.as_slice() {
            [x] => out.push(num(x)?),
            [a, b] | [a, b, _] => {
                let step = if fields.len() == 3 { num(fields[2])? } else { 1 };
                if step == 0 {
                    bail!("range step must be positive");
                }
                out.extend((num(a)?..=num(b)?).step_by(step));
            }
            _ => bail!("bad range '{part}'"),
        }
    }
    if out.is_empty() {
        bail!("empty list");
    }
    Ok(out)
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let fields: Vec<&str> = part.split(':').map(str::trim).collect();
        let num = |s: &str| s.parse::<f64>().map_err(|e| anyhow!("bad number '{s}': {e}"));
        match fields.as_slice() {
            [x] => out.push(num(x)?),
            [a, b, step] => {
                let (a, b, step) = (num(a)?, num(b)?, num(step)?);
                if !(step > 0.0) {
                    bail!("range step must be positive");
                }
                let n = ((b - a) / step + 1e-9).floor();
                if n < 0.0 {
                    bail!("empty range '{part}'");
                }
                out.extend((0..=n as usize).map(|i| a + i as f64 * step));
            }
            _ => bail!("real ranges need start:stop:step, got '{part}'"),
        }
    }
    if out.is_empty() {
        bail!("empty list");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_usize_list("1:4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_usize_list("8:20:4,3").unwrap(), vec![8, 12, 16, 20, 3]);
        assert!(parse_usize_list("").is_err());
        assert_eq!(parse_f64_list("-1:1:0.5").unwrap(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(parse_f64_list("0:1").is_err());
    }

    #[test]
    fn config_text() {
        let c = parse_config("# run\nmodel = fibonacci\nL=10 # sites\n\n").unwrap();
        assert_eq!(c["model"], "fibonacci");
        assert_eq!(c["L"], "10");
        assert!(parse_config("bogus = 1").is_err());
        assert!(parse_config("L = 1\nL = 2").is_err());
        assert!(parse_config("L 1").is_err());
    }

    #[test]
    fn flags_override_file_and_defaults_are_recorded() {
        let mut p = Params::default();
        p.file.insert("L".into(), "8".into());
        p.file.insert("seed".into(), "3".into());
        p.flags.insert("L".into(), "12".into());
        assert_eq!(p.required::<usize>("L").unwrap(), 12);
        assert_eq!(p.or::<u64>("seed", 0).unwrap(), 3);
        assert_eq!(p.or::<usize>("samples", 100).unwrap(), 100);
        assert_eq!(p.resolved_text(), "L = 12\nsamples = 100\nseed = 3\n");
    }
}
