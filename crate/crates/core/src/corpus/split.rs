//! Seeded train/test splits and stratified k-fold assignment.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::types::{Dataset, Label};
use crate::error::{Error, Result};
use crate::rng;

/// Default fraction of a corpus used for training.
pub const DEFAULT_TRAIN_FRACTION: f64 = 0.30;

/// Per-sample fold index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub k: usize,
    pub assignment: Vec<usize>,
    pub seed: u64,
}

impl FoldAssignment {
    /// Indices whose fold is `fold`, ascending.
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] == fold).collect()
    }

    /// Indices whose fold is not `fold`, ascending.
    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] != fold).collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Train/test index partition; both halves ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

fn check_both_classes(labels: &[Label]) -> Result<()> {
    let pos = labels.iter().filter(|l| !l.is_target()).count();
    if labels.len() < 2 || pos == 0 || pos == labels.len() {
        return Err(Error::SingleClass);
    }
    Ok(())
}

fn check_fraction(train_fraction: f64) -> Result<()> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train_fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    Ok(())
}

fn train_size(n: usize, train_fraction: f64) -> usize {
    ((train_fraction * n as f64).round() as usize).clamp(1, n - 1)
}

/// Uniform random split: `round(train_fraction * n)` samples go to training.
pub fn split_indices(labels: &[Label], train_fraction: f64, seed: u64) -> Result<SplitIndices> {
    check_fraction(train_fraction)?;
    check_both_classes(labels)?;
    let n = labels.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::stream(seed, "train-test-split"));
    let n_train = train_size(n, train_fraction);
    let mut train = order[..n_train].to_vec();
    let mut test = order[n_train..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitIndices { train, test })
}

/// Split that draws `train_fraction` of each class separately.
pub fn stratified_split_indices(labels: &[Label], train_fraction: f64, seed: u64) -> Result<SplitIndices> {
    check_fraction(train_fraction)?;
    check_both_classes(labels)?;
    let mut train = Vec::new();
    let mut test = Vec::new();
    for label in Label::BOTH {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == label).collect();
        members.shuffle(&mut rng::substream(seed, "stratified-split", label.as_u8() as u64));
        let n_train = ((train_fraction * members.len() as f64).round() as usize).min(members.len());
        train.extend_from_slice(&members[..n_train]);
        test.extend_from_slice(&members[n_train..]);
    }
    if train.is_empty() || test.is_empty() {
        return Err(Error::InvalidParameter("stratified split left one side empty".into()));
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitIndices { train, test })
}

/// Splits a dataset into (train, test), preserving file order inside each.
/// Every tweet must carry a label.
pub fn split_train_test(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let labels = ds.labels()?;
    let split = split_indices(&labels, train_fraction, seed)?;
    Ok((ds.subset(&split.train), ds.subset(&split.test)))
}

pub fn split_train_test_stratified(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let labels = ds.labels()?;
    let split = stratified_split_indices(&labels, train_fraction, seed)?;
    Ok((ds.subset(&split.train), ds.subset(&split.test)))
}

/// Stratified k-fold assignment.
///
/// Each class's indices are shuffled with a seeded stream and dealt
/// round-robin over the folds. The deal continues across classes from the
/// fold where the previous class stopped, which keeps total fold sizes within
/// one of each other as well.
pub fn stratified_kfold_labels(labels: &[Label], k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    for label in Label::BOTH {
        let count = labels.iter().filter(|&&l| l == label).count();
        if count < k {
            return Err(Error::TooFewPerClass {
                label: label.as_u8(),
                count,
                k,
            });
        }
    }
    let mut assignment = vec![0; labels.len()];
    let mut next_fold = 0;
    for label in Label::BOTH {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == label).collect();
        members.shuffle(&mut rng::substream(seed, "stratified-kfold", label.as_u8() as u64));
        for i in members {
            assignment[i] = next_fold;
            next_fold = (next_fold + 1) % k;
        }
    }
    Ok(FoldAssignment { k, assignment, seed })
}

pub fn stratified_kfold(ds: &Dataset, k: usize, seed: u64) -> Result<FoldAssignment> {
    stratified_kfold_labels(&ds.labels()?, k, seed)
}
