use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{Registry, DEFAULT_TRAIN_FRACTION};
use crate::error::{Error, Result};
use crate::evaluate::{BenchmarkProtocol, PipelineConfig, SelectionMetric};
use crate::features::FeatureConfig;
use crate::models::{Family, HyperGrid, ModelConfig};
use crate::preprocess::{Preprocessor, StopList};

/// Where the corpus files live.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    /// Directory searched for one file per disaster by its file hint.
    pub dir: Option<PathBuf>,
    /// Explicit disaster id → file; takes precedence over `dir`.
    pub files: BTreeMap<String, PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessConfig {
    /// Stop-word file, one word per line; the built-in list when absent.
    pub stopwords: Option<PathBuf>,
    pub stem: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            stopwords: None,
            stem: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    pub train_fraction: f64,
    pub stratified: bool,
    /// Cross-validation folds for grid search.
    pub k: usize,
    /// Timing repetitions in the benchmark; medians are reported.
    pub repetitions: usize,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            train_fraction: DEFAULT_TRAIN_FRACTION,
            stratified: false,
            k: 5,
            repetitions: 3,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Grid file; the built-in grids when absent.
    pub path: Option<PathBuf>,
    pub selection: SelectionMetric,
}

/// Everything a pipeline run depends on. Relative paths are resolved
/// against the directory of the file the config was read from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
    /// Disaster registry file; the built-in registry when absent.
    pub registry: Option<PathBuf>,
    pub data: DataConfig,
    pub preprocess: PreprocessConfig,
    pub features: FeatureConfig,
    /// Per-family settings, `[models.<family>] name = value`. Feature keys
    /// override `features` for that family only.
    pub models: toml::Table,
    pub grids: GridConfig,
    pub split: SplitConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mut nb = toml::Table::new();
        nb.insert("idf".into(), toml::Value::String("smooth".into()));
        let mut models = toml::Table::new();
        models.insert("nb".into(), toml::Value::Table(nb));
        RunConfig {
            seed: None,
            out_dir: PathBuf::from("out"),
            registry: None,
            data: DataConfig::default(),
            preprocess: PreprocessConfig::default(),
            features: FeatureConfig::default(),
            models,
            grids: GridConfig::default(),
            split: SplitConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("run config: {e}")))
    }

    /// Reads a config and resolves its relative paths against its directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.out_dir);
        self.registry.as_mut().map(fix);
        self.data.dir.as_mut().map(fix);
        self.data.files.values_mut().for_each(fix);
        self.preprocess.stopwords.as_mut().map(fix);
        self.grids.path.as_mut().map(fix);
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::Config("a seed is required (config `seed` or --seed)".into()))
    }

    /// Checks the seed, every referenced path, and all settings.
    pub fn validate(&self) -> Result<()> {
        self.seed()?;
        let paths = self
            .registry
            .iter()
            .chain(&self.data.dir)
            .chain(self.data.files.values())
            .chain(&self.preprocess.stopwords)
            .chain(&self.grids.path);
        for p in paths {
            if !p.exists() {
                return Err(Error::MissingFile(p.clone()));
            }
        }
        if !(self.split.train_fraction > 0.0 && self.split.train_fraction < 1.0) {
            return Err(Error::Config("split.train_fraction must lie in (0, 1)".into()));
        }
        if self.split.k < 2 {
            return Err(Error::Config("split.k must be >= 2".into()));
        }
        if self.split.repetitions == 0 {
            return Err(Error::Config("split.repetitions must be >= 1".into()));
        }
        let registry = self.registry()?;
        for id in self.data.files.keys() {
            registry.get(id)?;
        }
        self.grid()?;
        for family in Family::ALL {
            self.pipeline_for(family)?;
        }
        Ok(())
    }

    pub fn registry(&self) -> Result<Registry> {
        match &self.registry {
            Some(p) => Registry::from_file(p),
            None => Ok(Registry::builtin()),
        }
    }

    pub fn preprocessor(&self) -> Result<Preprocessor> {
        let stop = match &self.preprocess.stopwords {
            Some(p) => StopList::from_file(p)?,
            None => StopList::default(),
        };
        Ok(Preprocessor::new(stop, self.preprocess.stem))
    }

    pub fn grid(&self) -> Result<HyperGrid> {
        match &self.grids.path {
            Some(p) => HyperGrid::from_file(p),
            None => Ok(HyperGrid::builtin()),
        }
    }

    /// Default model for `family` with the `[models.<family>]` settings applied.
    pub fn pipeline_for(&self, family: Family) -> Result<PipelineConfig> {
        let Some(settings) = self.models.get(family.key()).or_else(|| self.models.get(family.label())) else {
            return Ok(PipelineConfig {
                features: self.features,
                model: ModelConfig::default_for(family),
            });
        };
        let mut table = toml::Table::new();
        table.insert(family.key().to_string(), settings.clone());
        let grid = HyperGrid::from_settings(&table)?;
        let cell = grid.cells(family, &self.features)?.remove(0);
        Ok(PipelineConfig {
            features: cell.features,
            model: cell.model,
        })
    }

    pub fn protocol(&self, include_vectorize: bool) -> BenchmarkProtocol {
        BenchmarkProtocol {
            train_fraction: self.split.train_fraction,
            stratified: self.split.stratified,
            repetitions: self.split.repetitions,
            include_vectorize,
        }
    }
}
