//! Brute-force k-nearest neighbours under cosine distance.

use serde::{Deserialize, Serialize};

use super::TrainingSet;
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KnnConfig {
    pub k: usize,
}

impl Default for KnnConfig {
    fn default() -> Self {
        KnnConfig { k: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Knn {
    pub config: KnnConfig,
    pub x: Vec<SparseVector>,
    pub y: Vec<Label>,
    norms: Vec<f64>,
}

/// `1 - cos(a, b)`, with zero vectors at distance 1 from everything.
pub fn cosine_distance(a: &SparseVector, b: &SparseVector) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    1.0 - a.dot(b) / (na * nb)
}

impl Knn {
    pub fn fit(ts: &TrainingSet, config: KnnConfig) -> Result<Self> {
        if config.k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        if config.k > ts.len() {
            return Err(Error::InvalidParameter(format!(
                "k = {} exceeds the {} training points",
                config.k,
                ts.len()
            )));
        }
        Ok(Knn {
            config,
            x: ts.x().to_vec(),
            y: ts.y().to_vec(),
            norms: ts.x().iter().map(SparseVector::norm).collect(),
        })
    }

    /// Indices of the k nearest training points, nearest first; equal
    /// distances resolve to the lower index.
    pub fn neighbors(&self, q: &SparseVector) -> Vec<usize> {
        let nq = q.norm();
        let mut d: Vec<(f64, usize)> = self
            .x
            .iter()
            .zip(&self.norms)
            .enumerate()
            .map(|(i, (x, &nx))| {
                let dist = if nq == 0.0 || nx == 0.0 {
                    1.0
                } else {
                    1.0 - q.dot(x) / (nq * nx)
                };
                (dist, i)
            })
            .collect();
        let k = self.config.k;
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < d.len() {
            d.select_nth_unstable_by(k - 1, cmp);
            d.truncate(k);
        }
        d.sort_unstable_by(cmp);
        d.into_iter().map(|(_, i)| i).collect()
    }

    /// Fraction of the k neighbours labelled 1.
    pub fn score(&self, q: &SparseVector) -> f64 {
        let hits = self.neighbors(q).into_iter().filter(|&i| self.y[i].is_target()).count();
        hits as f64 / self.config.k as f64
    }
}
