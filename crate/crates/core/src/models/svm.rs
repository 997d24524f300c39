//! Linear SVM trained with Pegasos stochastic subgradient steps.
//!
//! The bias is an extra weight on a constant feature (`bias_feature`), so it
//! is regularized with the rest of `w`. The returned weights are the running
//! average of all iterates.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::TrainingSet;
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::rng::substream;

const RESCALE_BELOW: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinearSvmConfig {
    /// Inverse regularization strength: `lambda = 1 / (c n)`.
    pub c: f64,
    pub epochs: usize,
    /// Value of the constant feature carrying the bias.
    pub bias_feature: f64,
}

impl Default for LinearSvmConfig {
    fn default() -> Self {
        LinearSvmConfig {
            c: 1.0,
            epochs: 20,
            bias_feature: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvm {
    pub config: LinearSvmConfig,
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Primal objective of the averaged iterate at the end of each epoch.
    pub objective: Vec<f64>,
}

/// `lambda/2 ||w||^2 + mean(max(0, 1 - y (w.x + b)))` with `b = w_bias * bias_feature`
/// and `w_bias` included in the norm.
pub fn primal_objective(weights: &[f64], w_bias: f64, bias_feature: f64, lambda: f64, ts: &TrainingSet) -> f64 {
    let reg = 0.5 * lambda * (weights.iter().map(|w| w * w).sum::<f64>() + w_bias * w_bias);
    let hinge: f64 = ts
        .iter()
        .map(|(x, y)| (1.0 - y.sign() * (x.dot_dense(weights) + w_bias * bias_feature)).max(0.0))
        .sum();
    reg + hinge / ts.len() as f64
}

impl LinearSvm {
    pub fn fit(ts: &TrainingSet, config: LinearSvmConfig, seed: u64) -> Result<Self> {
        if !(config.c > 0.0 && config.c.is_finite()) {
            return Err(Error::InvalidParameter(format!("c must be > 0, got {}", config.c)));
        }
        if config.epochs == 0 {
            return Err(Error::InvalidParameter("epochs must be >= 1".into()));
        }
        let n = ts.len();
        let dim = ts.feature_dim();
        let bias_index = dim;
        let lambda = 1.0 / (config.c * n as f64);
        let radius_sq = 1.0 / lambda;

        // w = a * v; the sum of all iterates so far is p + q * v.
        let mut v = vec![0.0; dim + 1];
        let mut a = 1.0;
        let mut norm_sq = 0.0;
        let mut p = vec![0.0; dim + 1];
        let mut q = 0.0;
        let mut steps = 0usize;
        let mut order: Vec<usize> = (0..n).collect();
        let mut objective = Vec::with_capacity(config.epochs);
        let mut avg = vec![0.0; dim + 1];

        for epoch in 0..config.epochs {
            let mut rng = substream(seed, "svm-epoch", epoch as u64);
            order.shuffle(&mut rng);
            for &i in &order {
                steps += 1;
                let t = steps as f64;
                let eta = 1.0 / (lambda * t);
                let x = &ts.x()[i];
                let y = ts.y()[i].sign();
                let margin = y * a * (x.dot_dense(&v[..dim]) + v[bias_index] * config.bias_feature);
                let shrink = 1.0 - 1.0 / t;
                if shrink == 0.0 {
                    // First step: w is still zero, keep the scale at 1.
                    a = 1.0;
                } else {
                    a *= shrink;
                    norm_sq *= shrink * shrink;
                }
                if margin < 1.0 {
                    let step = eta * y / a;
                    let mut update = |j: usize, xv: f64| {
                        let old = v[j];
                        let new = old + step * xv;
                        norm_sq += a * a * (new * new - old * old);
                        p[j] -= q * (new - old);
                        v[j] = new;
                    };
                    for (j, xv) in x.iter() {
                        update(j, xv);
                    }
                    update(bias_index, config.bias_feature);
                }
                // Projection onto the ball of radius 1/sqrt(lambda).
                if norm_sq > radius_sq {
                    let f = (radius_sq / norm_sq).sqrt();
                    a *= f;
                    norm_sq = radius_sq;
                }
                q += a;
                if a < RESCALE_BELOW {
                    // Fold the scale into v so p + q·v never cancels large terms.
                    for j in 0..=dim {
                        p[j] += q * v[j];
                        v[j] *= a;
                    }
                    q = 0.0;
                    a = 1.0;
                }
                if !a.is_finite() || a == 0.0 {
                    return Err(Error::Diverged { family: "svm", epoch });
                }
            }
            for j in 0..=dim {
                avg[j] = (p[j] + q * v[j]) / steps as f64;
            }
            if avg.iter().any(|w| !w.is_finite()) {
                return Err(Error::Diverged { family: "svm", epoch });
            }
            objective.push(primal_objective(&avg[..dim], avg[bias_index], config.bias_feature, lambda, ts));
        }
        let bias = avg[bias_index] * config.bias_feature;
        avg.truncate(dim);
        Ok(LinearSvm {
            config,
            weights: avg,
            bias,
            objective,
        })
    }

    /// Signed margin `w.x + b`.
    pub fn margin(&self, x: &SparseVector) -> f64 {
        x.dot_dense(&self.weights) + self.bias
    }
}
