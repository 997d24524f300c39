//! Hyperparameter grids: per-family lists of candidate values.
//!
//! Parameter names are either feature settings (`ngram`, `min_df`, `idf`,
//! `tf`, `norm`) or fields of the family's model config. Cells enumerate the
//! Cartesian product in odometer order: the last listed parameter varies
//! fastest.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{Map, Value};

use super::{Family, ModelConfig};
use crate::error::{Error, Result};
use crate::features::FeatureConfig;

pub type ParamValue = Value;

const FEATURE_KEYS: [&str; 5] = ["ngram", "min_df", "idf", "tf", "norm"];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct HyperGrid {
    params: BTreeMap<Family, Vec<(String, Vec<ParamValue>)>>,
}

/// One point of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub features: FeatureConfig,
    pub model: ModelConfig,
    /// The grid parameters that define this cell, in grid order.
    pub params: Vec<(String, ParamValue)>,
}

impl GridCell {
    pub fn describe(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl HyperGrid {
    pub fn new() -> Self {
        Self::default()
    }

    /// The grids shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(include_str!("../../config/default_grids.toml")).expect("built-in grids are valid")
    }

    /// Parses `[family]` tables of `name = [values...]`.
    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = toml::from_str(text).map_err(|e| Error::Config(format!("grid file: {e}")))?;
        Self::from_table(table)
    }

    /// Same as [`HyperGrid::parse`] on an already parsed table.
    pub fn from_table(table: toml::Table) -> Result<Self> {
        let mut grid = HyperGrid::new();
        for (family_name, params) in table {
            let family: Family = family_name.parse()?;
            let toml::Value::Table(params) = params else {
                return Err(Error::Config(format!("grid entry {family_name:?} must be a table")));
            };
            for (name, values) in params {
                let toml::Value::Array(values) = values else {
                    return Err(Error::Config(format!("{family_name}.{name} must be a list of candidate values")));
                };
                let values = values
                    .into_iter()
                    .map(|v| serde_json::to_value(v).map_err(Error::from))
                    .collect::<Result<Vec<_>>>()?;
                grid.set(family, &name, values);
            }
        }
        grid.validate(&FeatureConfig::default())?;
        Ok(grid)
    }

    /// Single-valued settings (`name = value`) as a one-cell-per-family grid.
    pub fn from_settings(table: &toml::Table) -> Result<Self> {
        let mut wrapped = toml::Table::new();
        for (family, params) in table {
            let toml::Value::Table(params) = params else {
                return Err(Error::Config(format!("model settings {family:?} must be a table")));
            };
            let params = params
                .iter()
                .map(|(k, v)| (k.clone(), toml::Value::Array(vec![v.clone()])))
                .collect();
            wrapped.insert(family.clone(), toml::Value::Table(params));
        }
        Self::from_table(wrapped)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Sets (or replaces) the candidate list for one parameter.
    pub fn set(&mut self, family: Family, name: &str, values: Vec<ParamValue>) {
        let list = self.params.entry(family).or_default();
        match list.iter_mut().find(|(k, _)| k == name) {
            Some(entry) => entry.1 = values,
            None => list.push((name.to_string(), values)),
        }
    }

    pub fn families(&self) -> impl Iterator<Item = Family> + '_ {
        self.params.keys().copied()
    }

    pub fn params(&self, family: Family) -> &[(String, Vec<ParamValue>)] {
        self.params.get(&family).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Checks every value by building every cell.
    pub fn validate(&self, base: &FeatureConfig) -> Result<()> {
        for &family in self.params.keys() {
            for (name, values) in self.params(family) {
                if values.is_empty() {
                    return Err(Error::Config(format!("{family}.{name} has no candidate values")));
                }
            }
            self.cells(family, base)?;
        }
        Ok(())
    }

    /// Number of cells for `family`; 1 when the family has no grid.
    pub fn size(&self, family: Family) -> usize {
        self.params(family).iter().map(|(_, v)| v.len()).product()
    }

    /// All cells for `family`, starting from `base` features and default
    /// model settings.
    pub fn cells(&self, family: Family, base: &FeatureConfig) -> Result<Vec<GridCell>> {
        let params = self.params(family);
        let mut cells = Vec::with_capacity(self.size(family));
        let mut odometer = vec![0usize; params.len()];
        loop {
            let chosen: Vec<(String, ParamValue)> = params
                .iter()
                .zip(&odometer)
                .map(|((k, vs), &i)| (k.clone(), vs[i].clone()))
                .collect();
            cells.push(build_cell(family, base, chosen)?);
            // Advance, last position fastest.
            let mut pos = params.len();
            loop {
                if pos == 0 {
                    return Ok(cells);
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < params[pos].1.len() {
                    break;
                }
                odometer[pos] = 0;
            }
        }
    }
}

fn as_object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn build_cell(family: Family, base: &FeatureConfig, params: Vec<(String, ParamValue)>) -> Result<GridCell> {
    let mut feat = as_object(serde_json::to_value(base)?);
    let mut model = as_object(serde_json::to_value(ModelConfig::default_for(family))?);
    for (k, v) in &params {
        if FEATURE_KEYS.contains(&k.as_str()) {
            feat.insert(k.clone(), v.clone());
        } else if k == "family" {
            return Err(Error::Config(format!("{family}: \"family\" is not a grid parameter")));
        } else {
            model.insert(k.clone(), v.clone());
        }
    }
    let describe = |e: serde_json::Error| {
        let listed: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        Error::Config(format!("{family} grid cell [{}]: {e}", listed.join(", ")))
    };
    let features: FeatureConfig = serde_json::from_value(Value::Object(feat)).map_err(describe)?;
    let model: ModelConfig = serde_json::from_value(Value::Object(model)).map_err(describe)?;
    if features.min_df == 0 {
        return Err(Error::Config(format!("{family}: min_df must be >= 1")));
    }
    model
        .validate()
        .map_err(|e| Error::Config(format!("{family} grid: {e}")))?;
    Ok(GridCell { features, model, params })
}
