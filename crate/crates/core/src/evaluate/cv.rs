//! Featurize-then-fit pipelines and stratified cross-validation.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{confusion, mean_defined, metrics, ConfusionMatrix, MetricsReport};
use crate::corpus::{stratified_kfold_labels, FoldAssignment, Label};
use crate::error::{Error, Result};
use crate::features::{FeatureConfig, Vectorizer};
use crate::models::{fit, ClassifierModel, ModelConfig, TrainingSet};
use crate::preprocess::TokenizedDoc;
use crate::rng::derive_seed;

/// Featurization plus model settings: everything needed to fit from tokens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub features: FeatureConfig,
    pub model: ModelConfig,
}

/// Preprocessed documents with their labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledCorpus {
    pub docs: Vec<TokenizedDoc>,
    pub labels: Vec<Label>,
}

impl LabeledCorpus {
    pub fn new(docs: Vec<TokenizedDoc>, labels: Vec<Label>) -> Result<Self> {
        if docs.len() != labels.len() {
            return Err(Error::LengthMismatch {
                left: docs.len(),
                right: labels.len(),
            });
        }
        Ok(LabeledCorpus { docs, labels })
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn subset(&self, indices: &[usize]) -> LabeledCorpus {
        LabeledCorpus {
            docs: indices.iter().map(|&i| self.docs[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

/// A vectorizer fitted on training documents and the classifier trained on
/// its output.
#[derive(Debug, Clone)]
pub struct FittedPipeline {
    pub vectorizer: Vectorizer,
    pub model: ClassifierModel,
}

impl FittedPipeline {
    pub fn fit(train: &LabeledCorpus, config: &PipelineConfig, seed: u64) -> Result<Self> {
        let vectorizer = Vectorizer::fit(&train.docs, config.features)?;
        let x = vectorizer.transform_all(&train.docs);
        let ts = TrainingSet::new(x, train.labels.clone(), vectorizer.dim())?;
        let model = fit(&ts, &config.model, seed)?;
        Ok(FittedPipeline { vectorizer, model })
    }

    pub fn scores(&self, docs: &[TokenizedDoc]) -> Result<Vec<f64>> {
        self.model.score_all(&self.vectorizer.transform_all(docs))
    }

    pub fn predict(&self, docs: &[TokenizedDoc]) -> Result<Vec<Label>> {
        Ok(self.scores(docs)?.into_iter().map(|s| self.model.decide(s)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub confusion: ConfusionMatrix,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub k: usize,
    pub folds: Vec<FoldReport>,
    pub mean_accuracy: f64,
    /// Mean label-1 F1 over folds where it is defined.
    pub mean_f1: Option<f64>,
    pub f1_undefined_folds: usize,
}

/// Fits on all folds but one and evaluates on the held-out fold, for every
/// fold. Folds run in parallel; results are ordered by fold index.
pub fn cross_validate(corpus: &LabeledCorpus, config: &PipelineConfig, k: usize, seed: u64) -> Result<CvResult> {
    let folds = cv_folds(&corpus.labels, k, seed)?;
    cross_validate_folds(corpus, config, &folds, seed, &AtomicUsize::new(0))
}

/// Stratified folds, except that `k == n` gives leave-one-out: one sample per
/// fold in index order, where per-class stratification cannot apply.
pub fn cv_folds(labels: &[Label], k: usize, seed: u64) -> Result<FoldAssignment> {
    if k == labels.len() && k >= 2 {
        return Ok(FoldAssignment {
            k,
            assignment: (0..k).collect(),
            seed,
        });
    }
    stratified_kfold_labels(labels, k, seed)
}

/// Model seed for one fold; shared by every grid cell so cells are compared
/// on identical randomness.
pub(crate) fn fold_seed(seed: u64, fold: usize) -> u64 {
    derive_seed(seed, "cv-fit", fold as u64)
}

pub(crate) fn cross_validate_folds(
    corpus: &LabeledCorpus,
    config: &PipelineConfig,
    folds: &FoldAssignment,
    seed: u64,
    fit_calls: &AtomicUsize,
) -> Result<CvResult> {
    let reports = (0..folds.k)
        .into_par_iter()
        .map(|f| {
            let train = corpus.subset(&folds.train_indices(f));
            let test = corpus.subset(&folds.test_indices(f));
            fit_calls.fetch_add(1, Ordering::Relaxed);
            let pipeline = FittedPipeline::fit(&train, config, fold_seed(seed, f))?;
            let pred = pipeline.predict(&test.docs)?;
            let cm = confusion(&pred, &test.labels)?;
            Ok(FoldReport {
                fold: f,
                n_train: train.len(),
                n_test: test.len(),
                confusion: cm,
                metrics: metrics(&cm)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mean_accuracy = reports.iter().map(|r| r.metrics.accuracy).sum::<f64>() / reports.len() as f64;
    let (mean_f1, f1_undefined_folds) = mean_defined(reports.iter().map(|r| r.metrics.target().f1));
    Ok(CvResult {
        k: folds.k,
        folds: reports,
        mean_accuracy,
        mean_f1,
        f1_undefined_folds,
    })
}
