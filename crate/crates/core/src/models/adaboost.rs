//! Discrete AdaBoost over decision stumps.

use serde::{Deserialize, Serialize};

use super::TrainingSet;
use crate::error::{Error, Result};
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdaBoostConfig {
    pub n_rounds: usize,
}

impl Default for AdaBoostConfig {
    fn default() -> Self {
        AdaBoostConfig { n_rounds: 100 }
    }
}

/// `h(x) = polarity` if `x[feature] > threshold`, else `-polarity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
    pub polarity: f64,
}

impl Stump {
    pub fn predict(&self, x: &SparseVector) -> f64 {
        if x.get(self.feature) > self.threshold {
            self.polarity
        } else {
            -self.polarity
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Halt {
    /// Ran all configured rounds.
    Completed,
    /// A stump classified the weighted sample perfectly.
    PerfectStump,
    /// No stump beat weighted error 0.5.
    NoWeakLearner,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaBoost {
    pub config: AdaBoostConfig,
    pub stumps: Vec<Stump>,
    pub alphas: Vec<f64>,
    /// Weighted error of each accepted stump.
    pub stump_errors: Vec<f64>,
    /// Unweighted training error of the ensemble after each accepted round.
    pub training_error: Vec<f64>,
    pub halt: Halt,
}

const MIN_ERROR: f64 = 1e-10;

/// Threshold used by the constant stump that sends every sample to the `>` side.
const BELOW_ALL: f64 = f64::MIN;

/// Columns of the design matrix: sorted non-zero `(value, sample)` per feature.
fn columns(ts: &TrainingSet) -> Vec<Vec<(f64, usize)>> {
    let mut cols = vec![Vec::new(); ts.feature_dim()];
    for (i, x) in ts.x().iter().enumerate() {
        for (j, v) in x.iter().filter(|&(_, v)| v != 0.0) {
            cols[j].push((v, i));
        }
    }
    for c in &mut cols {
        c.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    }
    cols
}

/// Lowest weighted error stump; ties keep the earliest (feature, threshold, polarity).
fn best_stump(cols: &[Vec<(f64, usize)>], y: &[f64], w: &[f64]) -> (Stump, f64) {
    let total_pos: f64 = y.iter().zip(w).filter(|(y, _)| **y > 0.0).map(|(_, w)| w).sum();
    let total_neg: f64 = w.iter().sum::<f64>() - total_pos;
    // Constant stumps: everything on the `>` side.
    let mut best = if total_neg <= total_pos {
        (Stump { feature: 0, threshold: BELOW_ALL, polarity: 1.0 }, total_neg)
    } else {
        (Stump { feature: 0, threshold: BELOW_ALL, polarity: -1.0 }, total_pos)
    };
    let mut consider = |stump: Stump, err: f64| {
        if err < best.1 {
            best = (stump, err);
        }
    };
    for (j, col) in cols.iter().enumerate() {
        if col.is_empty() {
            continue;
        }
        let mut buckets: Vec<(f64, f64, f64)> = Vec::new();
        let (mut nz_pos, mut nz_neg) = (0.0, 0.0);
        for run in col.chunk_by(|a, b| a.0 == b.0) {
            let (mut p, mut q) = (0.0, 0.0);
            for &(_, i) in run {
                if y[i] > 0.0 {
                    p += w[i];
                } else {
                    q += w[i];
                }
            }
            nz_pos += p;
            nz_neg += q;
            buckets.push((run[0].0, p, q));
        }
        if col.len() < y.len() {
            let at = buckets.partition_point(|b| b.0 < 0.0);
            buckets.insert(at, (0.0, (total_pos - nz_pos).max(0.0), (total_neg - nz_neg).max(0.0)));
        }
        // Left side (<= threshold) accumulates.
        let (mut lp, mut lq) = (0.0, 0.0);
        for k in 0..buckets.len() - 1 {
            lp += buckets[k].1;
            lq += buckets[k].2;
            let threshold = 0.5 * (buckets[k].0 + buckets[k + 1].0);
            // polarity +1: left predicts -1, right +1.
            let err_plus = lp + (total_neg - lq);
            let err_minus = lq + (total_pos - lp);
            consider(Stump { feature: j, threshold, polarity: 1.0 }, err_plus);
            consider(Stump { feature: j, threshold, polarity: -1.0 }, err_minus);
        }
    }
    best
}

impl AdaBoost {
    pub fn fit(ts: &TrainingSet, config: AdaBoostConfig) -> Result<Self> {
        if config.n_rounds == 0 {
            return Err(Error::InvalidParameter("n_rounds must be >= 1".into()));
        }
        let n = ts.len();
        let y: Vec<f64> = ts.y().iter().map(|l| l.sign()).collect();
        let cols = columns(ts);
        let mut w = vec![1.0 / n as f64; n];
        let mut margins = vec![0.0; n];
        let mut model = AdaBoost {
            config,
            stumps: Vec::new(),
            alphas: Vec::new(),
            stump_errors: Vec::new(),
            training_error: Vec::new(),
            halt: Halt::Completed,
        };
        for _ in 0..config.n_rounds {
            let (stump, _) = best_stump(&cols, &y, &w);
            let h: Vec<f64> = ts.x().iter().map(|x| stump.predict(x)).collect();
            // Recompute exactly; the sweep's running sums can drift.
            let wrong: Vec<bool> = h.iter().zip(&y).map(|(h, y)| h != y).collect();
            let eps: f64 = w.iter().zip(&wrong).filter(|(_, &bad)| bad).map(|(w, _)| w).sum();
            if eps >= 0.5 {
                model.halt = Halt::NoWeakLearner;
                break;
            }
            let perfect = !wrong.iter().any(|&b| b);
            let alpha = 0.5 * ((1.0 - eps.max(MIN_ERROR)) / eps.max(MIN_ERROR)).ln();
            for i in 0..n {
                margins[i] += alpha * h[i];
            }
            model.stumps.push(stump);
            model.alphas.push(alpha);
            model.stump_errors.push(eps);
            let err = margins.iter().zip(&y).filter(|(m, y)| (**m > 0.0) != (**y > 0.0)).count();
            model.training_error.push(err as f64 / n as f64);
            if perfect {
                model.halt = Halt::PerfectStump;
                break;
            }
            let mut z = 0.0;
            for i in 0..n {
                w[i] *= (-alpha * y[i] * h[i]).exp();
                z += w[i];
            }
            for wi in &mut w {
                *wi /= z;
            }
        }
        Ok(model)
    }

    /// `sum_m alpha_m h_m(x)`.
    pub fn score(&self, x: &SparseVector) -> f64 {
        self.stumps.iter().zip(&self.alphas).map(|(s, a)| a * s.predict(x)).sum()
    }

    pub fn rounds(&self) -> usize {
        self.stumps.len()
    }
}
