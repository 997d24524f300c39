//! Wall-clock comparison of families on one shared train/test split.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::cv::{LabeledCorpus, PipelineConfig};
use super::metrics::{confusion, majority_baseline_accuracy, metrics, ConfusionMatrix, MetricsReport};
use super::roc::{roc_curve, RocCurve};
use crate::corpus::{split_indices, stratified_split_indices, SplitIndices, DEFAULT_TRAIN_FRACTION};
use crate::error::{Error, Result};
use crate::features::Vectorizer;
use crate::models::{fit, Family, TrainingSet};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchmarkProtocol {
    pub train_fraction: f64,
    pub stratified: bool,
    /// Timings are medians over this many repetitions.
    pub repetitions: usize,
    /// Count vectorizer fitting and transformation in the fit/predict times.
    pub include_vectorize: bool,
}

impl Default for BenchmarkProtocol {
    fn default() -> Self {
        BenchmarkProtocol {
            train_fraction: DEFAULT_TRAIN_FRACTION,
            stratified: false,
            repetitions: 3,
            include_vectorize: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub family: Family,
    pub disaster_id: String,
    pub params: String,
    pub n_train: usize,
    pub n_test: usize,
    pub fit_seconds: f64,
    pub predict_seconds: f64,
    pub vectorize_seconds: f64,
    pub accuracy: f64,
    pub majority_baseline: f64,
    pub confusion: ConfusionMatrix,
    pub metrics: MetricsReport,
    /// `None` when the test split holds a single class.
    pub auc: Option<f64>,
    #[serde(skip)]
    pub roc: Option<RocCurve>,
}

impl BenchmarkRecord {
    pub fn total_seconds(&self) -> f64 {
        self.fit_seconds + self.predict_seconds
    }
}

/// The split every family in a benchmark shares.
pub fn benchmark_split(corpus: &LabeledCorpus, protocol: &BenchmarkProtocol, seed: u64) -> Result<SplitIndices> {
    let split_seed = derive_seed(seed, "benchmark-split", 0);
    if protocol.stratified {
        stratified_split_indices(&corpus.labels, protocol.train_fraction, split_seed)
    } else {
        split_indices(&corpus.labels, protocol.train_fraction, split_seed)
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Fits and evaluates each pipeline on one shared split. Families run one
/// after another so timings do not compete; records come back in family order.
pub fn benchmark(
    corpus: &LabeledCorpus,
    disaster_id: &str,
    pipelines: &[PipelineConfig],
    protocol: &BenchmarkProtocol,
    seed: u64,
) -> Result<Vec<BenchmarkRecord>> {
    if protocol.repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be >= 1".into()));
    }
    let split = benchmark_split(corpus, protocol, seed)?;
    let train = corpus.subset(&split.train);
    let test = corpus.subset(&split.test);
    let baseline = majority_baseline_accuracy(&train.labels, &test.labels);
    let mut ordered: Vec<&PipelineConfig> = pipelines.iter().collect();
    ordered.sort_by_key(|p| p.model.family());

    let mut records = Vec::with_capacity(ordered.len());
    for pipeline in ordered {
        let family = pipeline.model.family();
        let model_seed = derive_seed(seed, "benchmark-fit", family as u64);
        let (mut fit_t, mut pred_t, mut vec_t) = (Vec::new(), Vec::new(), Vec::new());
        let mut outcome = None;
        for _ in 0..protocol.repetitions {
            let t = Instant::now();
            let vectorizer = Vectorizer::fit(&train.docs, pipeline.features)?;
            let train_x = vectorizer.transform_all(&train.docs);
            let vec_fit = t.elapsed().as_secs_f64();
            let t = Instant::now();
            let test_x = vectorizer.transform_all(&test.docs);
            let vec_test = t.elapsed().as_secs_f64();
            let ts = TrainingSet::new(train_x, train.labels.clone(), vectorizer.dim())?;

            let t = Instant::now();
            let model = fit(&ts, &pipeline.model, model_seed)?;
            let fit_s = t.elapsed().as_secs_f64();
            let t = Instant::now();
            let scores = test_x.iter().map(|x| model.score(x)).collect::<Result<Vec<f64>>>()?;
            let pred_s = t.elapsed().as_secs_f64();

            let extra = if protocol.include_vectorize { (vec_fit, vec_test) } else { (0.0, 0.0) };
            fit_t.push(fit_s + extra.0);
            pred_t.push(pred_s + extra.1);
            vec_t.push(vec_fit + vec_test);
            outcome = Some((model, scores));
        }
        let (model, scores) = outcome.expect("at least one repetition");
        let pred: Vec<_> = scores.iter().map(|&s| model.decide(s)).collect();
        let cm = confusion(&pred, &test.labels)?;
        let m = metrics(&cm)?;
        let roc = roc_curve(&scores, &test.labels).ok();
        records.push(BenchmarkRecord {
            family,
            disaster_id: disaster_id.to_string(),
            params: pipeline.model.describe(),
            n_train: train.len(),
            n_test: test.len(),
            fit_seconds: median(fit_t),
            predict_seconds: median(pred_t),
            vectorize_seconds: median(vec_t),
            accuracy: m.accuracy,
            majority_baseline: baseline,
            confusion: cm,
            metrics: m,
            auc: roc.as_ref().map(|r| r.auc),
            roc,
        });
    }
    Ok(records)
}
