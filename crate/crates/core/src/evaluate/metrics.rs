//! Confusion matrices and the metrics derived from them. Label 1 is the
//! detection target: a true positive is a label-1 sample predicted as 1.

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn add(&mut self, pred: Label, truth: Label) {
        match (pred.is_target(), truth.is_target()) {
            (true, true) => self.tp += 1,
            (false, false) => self.tn += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
        }
    }
}

pub fn confusion(pred: &[Label], truth: &[Label]) -> Result<ConfusionMatrix> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: pred.len(),
            right: truth.len(),
        });
    }
    if pred.is_empty() {
        return Err(Error::InvalidParameter("cannot tally an empty prediction list".into()));
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &t) in pred.iter().zip(truth) {
        cm.add(p, t);
    }
    Ok(cm)
}

/// Precision, recall and F1 for one class; `None` marks an undefined value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

impl ClassMetrics {
    /// From the class's hits, predicted count and actual count.
    fn new(hits: usize, predicted: usize, actual: usize) -> Self {
        let precision = ratio(hits, predicted);
        let recall = ratio(hits, actual);
        let f1 = match (precision, recall) {
            (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
            _ => None,
        };
        ClassMetrics { precision, recall, f1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    /// Metrics for label 0 and label 1.
    pub classes: [ClassMetrics; 2],
}

impl MetricsReport {
    pub fn class(&self, label: Label) -> &ClassMetrics {
        &self.classes[label.index()]
    }

    /// Metrics of the detection target (label 1).
    pub fn target(&self) -> &ClassMetrics {
        self.class(Label::Negative)
    }
}

pub fn metrics(cm: &ConfusionMatrix) -> Result<MetricsReport> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::InvalidParameter("metrics need at least one sample".into()));
    }
    Ok(MetricsReport {
        accuracy: (cm.tp + cm.tn) as f64 / total as f64,
        classes: [
            ClassMetrics::new(cm.tn, cm.tn + cm.fn_, cm.tn + cm.fp),
            ClassMetrics::new(cm.tp, cm.tp + cm.fp, cm.tp + cm.fn_),
        ],
    })
}

/// Mean of the defined values and how many were skipped.
pub fn mean_defined(values: impl IntoIterator<Item = Option<f64>>) -> (Option<f64>, usize) {
    let mut sum = 0.0;
    let mut n = 0;
    let mut skipped = 0;
    for v in values {
        match v {
            Some(x) => {
                sum += x;
                n += 1;
            }
            None => skipped += 1,
        }
    }
    ((n > 0).then(|| sum / n as f64), skipped)
}

/// Accuracy on `test` of always predicting the most frequent label of
/// `train` (ties resolve to label 0).
pub fn majority_baseline_accuracy(train: &[Label], test: &[Label]) -> f64 {
    let ones = train.iter().filter(|l| l.is_target()).count();
    let majority = Label::from_target(2 * ones > train.len());
    if test.is_empty() {
        return 0.0;
    }
    test.iter().filter(|&&l| l == majority).count() as f64 / test.len() as f64
}
