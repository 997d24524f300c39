//! The shipped registry of the nine studied disasters.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::types::DisasterSpec;
use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("../../data/disasters.toml");

/// Group of the five disasters of different types.
pub const GROUP_TYPES: &str = "types";
/// Group of the five hurricanes.
pub const GROUP_HURRICANES: &str = "hurricanes";

#[derive(Debug, Clone, Deserialize)]
pub struct Registry {
    #[serde(default)]
    pub groups: BTreeMap<String, Vec<String>>,
    pub disasters: Vec<DisasterSpec>,
}

impl Registry {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("shipped registry is valid")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let reg: Registry =
            toml::from_str(text).map_err(|e| Error::Config(format!("registry: {e}")))?;
        reg.validate()?;
        Ok(reg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for d in &self.disasters {
            d.validate()?;
            if !seen.insert(d.disaster_id.as_str()) {
                return Err(Error::Config(format!("duplicate disaster id {}", d.disaster_id)));
            }
        }
        for (group, ids) in &self.groups {
            for id in ids {
                if !seen.contains(id.as_str()) {
                    return Err(Error::Config(format!("group {group} names unknown disaster {id}")));
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, id: &str) -> Result<&DisasterSpec> {
        self.disasters
            .iter()
            .find(|d| d.disaster_id == id)
            .ok_or_else(|| Error::Config(format!("unknown disaster id {id:?}")))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.disasters.iter().map(|d| d.disaster_id.as_str())
    }

    pub fn group(&self, name: &str) -> Result<&[String]> {
        self.groups
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::Config(format!("unknown disaster group {name:?}")))
    }

    /// Finds each disaster's file in `dir` by its `file_hint`. Only `.csv`
    /// files are considered; a disaster matching zero or several files is an
    /// error so that a corpus is never silently mis-assigned.
    pub fn discover_files(&self, dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
        if !dir.is_dir() {
            return Err(Error::MissingFile(dir.to_path_buf()));
        }
        let files = csv_files(dir)?;
        self.disasters
            .iter()
            .map(|d| Ok((d.disaster_id.clone(), match_hint(d, dir, &files)?)))
            .collect()
    }

    /// Finds one disaster's file in `dir`; see [`Registry::discover_files`].
    pub fn discover_file(&self, dir: &Path, id: &str) -> Result<PathBuf> {
        if !dir.is_dir() {
            return Err(Error::MissingFile(dir.to_path_buf()));
        }
        match_hint(self.get(id)?, dir, &csv_files(dir)?)
    }
}

fn csv_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    collect_csv(dir, &mut files)?;
    files.sort();
    Ok(files)
}

fn match_hint(d: &DisasterSpec, dir: &Path, files: &[PathBuf]) -> Result<PathBuf> {
    let hint = d
        .file_hint
        .as_deref()
        .ok_or_else(|| Error::Config(format!("disaster {} has no file_hint", d.disaster_id)))?;
    let matches: Vec<&PathBuf> = files
        .iter()
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .map(|n| n.to_ascii_lowercase().contains(hint))
                .unwrap_or(false)
        })
        .collect();
    match matches.as_slice() {
        [one] => Ok((*one).clone()),
        [] => Err(Error::MissingFile(dir.join(format!("*{hint}*.csv")))),
        many => Err(Error::Config(format!(
            "several files match disaster {}: {:?}",
            d.disaster_id, many
        ))),
    }
}

fn collect_csv(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_dir() {
            collect_csv(&path, out)?;
        } else if path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.eq_ignore_ascii_case("csv"))
            .unwrap_or(false)
        {
            out.push(path);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    #[test]
    fn builtin_registry_has_nine_disasters_and_two_groups() {
        let reg = Registry::builtin();
        assert_eq!(reg.disasters.len(), 9);
        assert_eq!(reg.group(GROUP_TYPES).unwrap().len(), 5);
        assert_eq!(reg.group(GROUP_HURRICANES).unwrap().len(), 5);
        let tornado = reg.get("tornado_2011").unwrap();
        assert_eq!(tornado.duration_start, NaiveDate::from_ymd_opt(2011, 4, 25).unwrap());
        assert_eq!(tornado.window_end, NaiveDate::from_ymd_opt(2011, 5, 5).unwrap());
        assert_eq!(tornado.keywords.len(), 4);
    }

    #[test]
    fn window_must_contain_duration() {
        let mut reg = Registry::builtin();
        reg.disasters[0].window_start = reg.disasters[0].duration_start + chrono::Days::new(1);
        assert!(reg.validate().is_err());
    }
}
