//! CSV assembly and all-or-nothing file output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use tempfile::NamedTempFile;

/// Reals are written with 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

pub struct Csv {
    columns: usize,
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Csv {
        Csv { columns: header.len(), text: format!("{}\n", header.join(",")) }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "row width");
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Files produced by one run. Nothing touches the destination until
/// [`Outputs::commit`], which writes every file through a temporary in the
/// same directory and renames it into place. If any step fails, files
/// already renamed by this commit are removed again.
#[derive(Default)]
pub struct Outputs {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, path: impl Into<PathBuf>, bytes: impl Into<Vec<u8>>) {
        self.files.push((path.into(), bytes.into()));
    }

    pub fn commit(self) -> Result<()> {
        let mut staged = Vec::new();
        for (path, bytes) in &self.files {
            staged.push((stage(path, bytes)?, path));
        }
        let mut done: Vec<&PathBuf> = Vec::new();
        for (tmp, path) in staged {
            if let Err(e) = tmp.persist(path) {
                for p in done {
                    let _ = std::fs::remove_file(p);
                }
                return Err(e.error).with_context(|| format!("writing {}", path.display()));
            }
            done.push(path);
        }
        Ok(())
    }
}

fn stage(path: &Path, bytes: &[u8]) -> Result<NamedTempFile> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp =
        NamedTempFile::new_in(dir).with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    Ok(tmp)
}

/// `results.csv` → `results.config`.
pub fn config_path(out: &Path) -> PathBuf {
    out.with_extension("config")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_have_seventeen_digits() {
        assert_eq!(real(0.1), "1.0000000000000001e-1");
        assert_eq!(real(-2.0), "-2.0000000000000000e0");
        assert_eq!(opt_real(None), "");
    }

    #[test]
    fn failed_commit_leaves_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("a.csv");
        let mut out = Outputs::default();
        out.add(&good, "x\n");
        out.add(dir.path().join("missing/b.csv"), "y\n");
        assert!(out.commit().is_err());
        assert!(!good.exists());
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
    }

    #[test]
    fn commit_writes_all_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = Outputs::default();
        out.add(dir.path().join("a.csv"), "x\n");
        out.add(dir.path().join("a.config"), "L = 1\n");
        out.commit().unwrap();
        assert_eq!(std::fs::read_to_string(dir.path().join("a.csv")).unwrap(), "x\n");
    }
}
