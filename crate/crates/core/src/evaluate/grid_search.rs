//! Exhaustive grid search scored by stratified cross-validation.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cv::{cross_validate_folds, cv_folds, CvResult, LabeledCorpus, PipelineConfig};
use crate::error::{Error, Result};
use crate::features::FeatureConfig;
use crate::models::{Family, HyperGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMetric {
    /// Mean fold accuracy.
    #[default]
    Accuracy,
    /// Mean fold F1 of label 1; cells where it is undefined rank last.
    F1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub index: usize,
    /// `name=value` pairs that define the cell.
    pub params: String,
    pub pipeline: PipelineConfig,
    pub cv: CvResult,
}

impl CellResult {
    fn key(&self, metric: SelectionMetric) -> f64 {
        match metric {
            SelectionMetric::Accuracy => self.cv.mean_accuracy,
            SelectionMetric::F1 => self.cv.mean_f1.unwrap_or(f64::NEG_INFINITY),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub family: Family,
    pub metric: SelectionMetric,
    pub cells: Vec<CellResult>,
    /// Index into `cells` of the winner: best score, earliest cell on ties.
    pub best: usize,
    pub fit_calls: usize,
}

impl GridSearchResult {
    pub fn best_cell(&self) -> &CellResult {
        &self.cells[self.best]
    }
}

/// Every cell of `family`'s grid is cross-validated on the same folds.
pub fn grid_search(
    corpus: &LabeledCorpus,
    family: Family,
    grid: &HyperGrid,
    base_features: &FeatureConfig,
    k: usize,
    seed: u64,
    metric: SelectionMetric,
) -> Result<GridSearchResult> {
    let cells = grid.cells(family, base_features)?;
    if cells.is_empty() {
        return Err(Error::Config(format!("empty grid for {family}")));
    }
    let folds = cv_folds(&corpus.labels, k, seed)?;
    let calls = AtomicUsize::new(0);
    let results = cells
        .into_par_iter()
        .enumerate()
        .map(|(index, cell)| {
            let params = cell.describe();
            let pipeline = PipelineConfig {
                features: cell.features,
                model: cell.model,
            };
            let cv = cross_validate_folds(corpus, &pipeline, &folds, seed, &calls)?;
            Ok(CellResult {
                index,
                params,
                pipeline,
                cv,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, c) in results.iter().enumerate() {
        if c.key(metric) > results[best].key(metric) {
            best = i;
        }
    }
    Ok(GridSearchResult {
        family,
        metric,
        cells: results,
        best,
        fit_calls: calls.load(Ordering::Relaxed),
    })
}
