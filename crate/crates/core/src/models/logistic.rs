//! L2-regularized logistic regression trained by full-batch gradient descent.

use serde::{Deserialize, Serialize};

use super::TrainingSet;
use crate::error::{Error, Result};
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Penalty {
    L2,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogisticRegressionConfig {
    pub penalty: Penalty,
    /// Inverse regularization strength; the penalty term is `||w||^2 / (2 c n)`
    /// for `n` training samples, the same scale as the SVM's `c`.
    pub c: f64,
    /// Fixed step size. `None` uses `1 / L` with `L` an upper bound on the
    /// gradient's Lipschitz constant, which cannot diverge.
    pub lr: Option<f64>,
    pub epochs: usize,
}

impl Default for LogisticRegressionConfig {
    fn default() -> Self {
        LogisticRegressionConfig {
            penalty: Penalty::L2,
            c: 1.0,
            lr: None,
            epochs: 300,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticRegression {
    pub config: LogisticRegressionConfig,
    pub weights: Vec<f64>,
    pub bias: f64,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Objective and its gradient at `(weights, bias)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossGradient {
    pub loss: f64,
    pub weights: Vec<f64>,
    pub bias: f64,
}

/// Mean logistic loss plus `||w||^2 / (2 c n)` when the penalty is L2. The
/// bias is not penalized.
pub fn loss_and_gradient(
    weights: &[f64],
    bias: f64,
    ts: &TrainingSet,
    penalty: Penalty,
    c: f64,
) -> LossGradient {
    let n = ts.len() as f64;
    let mut grad = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    let mut loss = 0.0;
    for (x, y) in ts.iter() {
        let z = x.dot_dense(weights) + bias;
        let t = if y.is_target() { 1.0 } else { 0.0 };
        loss += softplus(z) - t * z;
        let r = (sigmoid(z) - t) / n;
        for (j, v) in x.iter() {
            grad[j] += r * v;
        }
        grad_b += r;
    }
    loss /= n;
    if penalty == Penalty::L2 {
        let inv_c = 1.0 / (c * n);
        loss += 0.5 * inv_c * weights.iter().map(|w| w * w).sum::<f64>();
        for (g, w) in grad.iter_mut().zip(weights) {
            *g += inv_c * w;
        }
    }
    LossGradient {
        loss,
        weights: grad,
        bias: grad_b,
    }
}

impl LogisticRegression {
    pub fn fit(ts: &TrainingSet, config: LogisticRegressionConfig) -> Result<Self> {
        if !(config.c > 0.0 && config.c.is_finite()) {
            return Err(Error::InvalidParameter(format!("c must be > 0, got {}", config.c)));
        }
        if let Some(lr) = config.lr {
            if !(lr > 0.0 && lr.is_finite()) {
                return Err(Error::InvalidParameter(format!("lr must be > 0, got {lr}")));
            }
        }
        let step = config.lr.unwrap_or_else(|| {
            // Hessian of the mean loss is bounded by mean(||(x, 1)||^2) / 4.
            let mean_sq = ts.iter().map(|(x, _)| x.norm_squared() + 1.0).sum::<f64>() / ts.len() as f64;
            let reg = if config.penalty == Penalty::L2 { 1.0 / (config.c * ts.len() as f64) } else { 0.0 };
            1.0 / (0.25 * mean_sq + reg)
        });
        let mut weights = vec![0.0; ts.feature_dim()];
        let mut bias = 0.0;
        for epoch in 0..config.epochs {
            let g = loss_and_gradient(&weights, bias, ts, config.penalty, config.c);
            if !g.loss.is_finite() {
                return Err(Error::Diverged { family: "lr", epoch });
            }
            for (w, gw) in weights.iter_mut().zip(&g.weights) {
                *w -= step * gw;
            }
            bias -= step * g.bias;
            if !bias.is_finite() {
                return Err(Error::Diverged { family: "lr", epoch });
            }
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Diverged {
                family: "lr",
                epoch: config.epochs,
            });
        }
        Ok(LogisticRegression { config, weights, bias })
    }

    /// `sigmoid(w . x + b)`.
    pub fn probability(&self, x: &SparseVector) -> f64 {
        sigmoid(x.dot_dense(&self.weights) + self.bias)
    }

    pub fn weight_norm(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    }
}
