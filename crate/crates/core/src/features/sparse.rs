use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse feature vector: `(index, weight)` pairs, strictly increasing by
/// index, with no stored zeros.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    /// Validates ordering and rejects stored zeros or non-finite weights.
    pub fn new(entries: Vec<(usize, f64)>) -> Result<Self> {
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidParameter(format!(
                    "sparse indices must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(&(i, v)) = entries.iter().find(|(_, v)| *v == 0.0 || !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("invalid stored weight {v} at index {i}")));
        }
        Ok(SparseVector { entries })
    }

    /// Sums duplicate indices, sorts, and drops zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut v: Vec<(usize, f64)> = pairs.into_iter().collect();
        v.sort_by_key(|&(i, _)| i);
        let mut entries: Vec<(usize, f64)> = Vec::with_capacity(v.len());
        for (i, w) in v {
            match entries.last_mut() {
                Some(last) if last.0 == i => last.1 += w,
                _ => entries.push((i, w)),
            }
        }
        entries.retain(|&(_, w)| w != 0.0);
        SparseVector { entries }
    }

    pub fn from_dense(dense: &[f64]) -> Self {
        SparseVector {
            entries: dense
                .iter()
                .enumerate()
                .filter(|(_, &w)| w != 0.0)
                .map(|(i, &w)| (i, w))
                .collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> f64 {
        match self.entries.binary_search_by_key(&index, |&(i, _)| i) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|&(i, _)| i)
    }

    /// Errors when an index is not below `dim`.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.max_index() {
            Some(i) if i >= dim => Err(Error::DimensionMismatch { index: i, dim }),
            _ => Ok(()),
        }
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j, mut sum) = (0, 0, 0.0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    sum += a[i].1 * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        sum
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, w)| w * dense[i]).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w * w).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> SparseVector {
        SparseVector::from_pairs(self.entries.iter().map(|&(i, w)| (i, w * factor)))
    }

    pub fn to_dense(&self, dim: usize) -> Vec<f64> {
        let mut d = vec![0.0; dim];
        for &(i, w) in &self.entries {
            d[i] = w;
        }
        d
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().copied()
    }
}
