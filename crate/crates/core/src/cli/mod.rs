//! Command-line front end: one subcommand per pipeline stage.

mod commands;
mod config;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Result;

pub use commands::{run, Selection};
pub use config::{DataConfig, GridConfig, PreprocessConfig, RunConfig, SplitConfig};

/// Prefix of the environment variables that mirror the flags.
pub const ENV_PREFIX: &str = "DISASTER_SENTIMENT_";

#[derive(Debug, Clone, Parser)]
#[command(name = "disaster-sentiment", version, about = "Disaster-tweet sentiment pipeline")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Run configuration (TOML).
    #[arg(long, global = true, env = "DISASTER_SENTIMENT_CONFIG")]
    pub config: Option<PathBuf>,

    /// Seed for every random choice; overrides the config.
    #[arg(long, global = true, env = "DISASTER_SENTIMENT_SEED")]
    pub seed: Option<u64>,

    /// Disaster id, or `all`.
    #[arg(long, global = true, env = "DISASTER_SENTIMENT_DISASTER", default_value = "all")]
    pub disaster: String,

    /// Model family (nb, lr, dt, svm, knn, rf, adaboost, mlp), or `all`.
    #[arg(long, global = true, env = "DISASTER_SENTIMENT_FAMILY", default_value = "all")]
    pub family: String,

    /// Output directory; overrides the config.
    #[arg(long, global = true, env = "DISASTER_SENTIMENT_OUT")]
    pub out: Option<PathBuf>,

    /// Directory holding the corpus files; overrides the config.
    #[arg(long, global = true, env = "DISASTER_SENTIMENT_DATA")]
    pub data: Option<PathBuf>,

    /// Also write SVG charts.
    #[arg(long, global = true, env = "DISASTER_SENTIMENT_PLOTS")]
    pub plots: bool,

    /// Count vectorization in benchmark timings.
    #[arg(long, global = true, env = "DISASTER_SENTIMENT_INCLUDE_VECTORIZE_TIME")]
    pub include_vectorize_time: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Load corpus files and write canonical CSVs with a load report.
    Ingest,
    /// Split, fit one model per family, and write the model and its metrics.
    Train,
    /// Cross-validated grid search per family.
    Gridsearch,
    /// Time and score every family on a shared split.
    Benchmark,
    /// Corpus analytics tables (and charts with --plots).
    Report,
}

impl Cli {
    /// The run config with flag overrides applied.
    pub fn run_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = Some(seed);
        }
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        if let Some(dir) = &self.data {
            cfg.data.dir = Some(dir.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
