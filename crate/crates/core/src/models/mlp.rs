//! One-hidden-layer perceptron: ReLU hidden units, sigmoid output,
//! binary cross-entropy, mini-batch gradient descent.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::logistic::{sigmoid, softplus};
use super::TrainingSet;
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::rng::{stream, substream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MlpConfig {
    pub hidden: usize,
    pub lr: f64,
    pub epochs: usize,
    pub batch_size: usize,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            hidden: 16,
            lr: 0.1,
            epochs: 50,
            batch_size: 32,
        }
    }
}

/// Network parameters. `w1` is stored row-major by input feature:
/// `w1[j * hidden + k]` connects feature `j` to hidden unit `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub hidden: usize,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
}

impl MlpParams {
    pub fn zeros(dim: usize, hidden: usize) -> Self {
        MlpParams {
            hidden,
            w1: vec![0.0; dim * hidden],
            b1: vec![0.0; hidden],
            w2: vec![0.0; hidden],
            b2: 0.0,
        }
    }

    /// Uniform Glorot initialization for both layers; biases start at zero.
    pub fn init<R: Rng>(dim: usize, hidden: usize, rng: &mut R) -> Self {
        let mut p = Self::zeros(dim, hidden);
        let l1 = (6.0 / (dim + hidden) as f64).sqrt();
        for w in &mut p.w1 {
            *w = rng.gen_range(-l1..=l1);
        }
        let l2 = (6.0 / (hidden + 1) as f64).sqrt();
        for w in &mut p.w2 {
            *w = rng.gen_range(-l2..=l2);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.w1.len() / self.hidden
    }

    fn pre_activation(&self, x: &SparseVector) -> Vec<f64> {
        let h = self.hidden;
        let mut a = self.b1.clone();
        for (j, v) in x.iter() {
            let row = &self.w1[j * h..(j + 1) * h];
            for (ak, wk) in a.iter_mut().zip(row) {
                *ak += v * wk;
            }
        }
        a
    }

    /// Output logit.
    pub fn logit(&self, x: &SparseVector) -> f64 {
        let a = self.pre_activation(x);
        self.b2 + a.iter().zip(&self.w2).map(|(a, w)| a.max(0.0) * w).sum::<f64>()
    }

    pub fn probability(&self, x: &SparseVector) -> f64 {
        sigmoid(self.logit(x))
    }
}

/// Mean cross-entropy over a batch and its gradient (same layout as the parameters).
pub fn batch_loss_and_gradient(params: &MlpParams, xs: &[&SparseVector], ys: &[Label]) -> (f64, MlpParams) {
    let h = params.hidden;
    let (loss, sparse) = backprop(params, xs.iter().copied().zip(ys.iter().copied()), xs.len());
    let mut g = MlpParams::zeros(params.dim(), h);
    for (j, row) in sparse.rows {
        g.w1[j * h..(j + 1) * h].copy_from_slice(&row);
    }
    g.b1 = sparse.b1;
    g.w2 = sparse.w2;
    g.b2 = sparse.b2;
    (loss, g)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub config: MlpConfig,
    pub params: MlpParams,
    /// Mean training loss after each epoch.
    pub loss_history: Vec<f64>,
}

impl Mlp {
    pub fn fit(ts: &TrainingSet, config: MlpConfig, seed: u64) -> Result<Self> {
        if config.hidden == 0 || config.batch_size == 0 {
            return Err(Error::InvalidParameter("hidden and batch_size must be >= 1".into()));
        }
        if !(config.lr > 0.0 && config.lr.is_finite()) {
            return Err(Error::InvalidParameter(format!("lr must be > 0, got {}", config.lr)));
        }
        let h = config.hidden;
        let mut params = MlpParams::init(ts.feature_dim(), h, &mut stream(seed, "mlp-init"));
        let mut order: Vec<usize> = (0..ts.len()).collect();
        let mut loss_history = Vec::with_capacity(config.epochs);
        for epoch in 0..config.epochs {
            order.shuffle(&mut substream(seed, "mlp-epoch", epoch as u64));
            let mut epoch_loss = 0.0;
            for batch in order.chunks(config.batch_size) {
                let items = batch.iter().map(|&i| (&ts.x()[i], ts.y()[i]));
                let (loss, grad) = backprop(&params, items, batch.len());
                if !loss.is_finite() {
                    return Err(Error::Diverged { family: "mlp", epoch });
                }
                epoch_loss += loss * batch.len() as f64;
                for (j, row) in grad.rows {
                    for (w, g) in params.w1[j * h..(j + 1) * h].iter_mut().zip(&row) {
                        *w -= config.lr * g;
                    }
                }
                for (w, g) in params.b1.iter_mut().zip(&grad.b1) {
                    *w -= config.lr * g;
                }
                for (w, g) in params.w2.iter_mut().zip(&grad.w2) {
                    *w -= config.lr * g;
                }
                params.b2 -= config.lr * grad.b2;
            }
            let mean = epoch_loss / ts.len() as f64;
            if !mean.is_finite() {
                return Err(Error::Diverged { family: "mlp", epoch });
            }
            loss_history.push(mean);
        }
        Ok(Mlp {
            config,
            params,
            loss_history,
        })
    }

    pub fn score(&self, x: &SparseVector) -> f64 {
        self.params.probability(x)
    }
}

/// Gradient with only the touched rows of `w1`, in ascending feature order.
struct SparseGradient {
    rows: Vec<(usize, Vec<f64>)>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: f64,
}

fn backprop<'a>(
    params: &MlpParams,
    batch: impl Iterator<Item = (&'a SparseVector, Label)>,
    size: usize,
) -> (f64, SparseGradient) {
    let h = params.hidden;
    let scale = 1.0 / size as f64;
    let mut rows: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    let mut g = SparseGradient {
        rows: Vec::new(),
        b1: vec![0.0; h],
        w2: vec![0.0; h],
        b2: 0.0,
    };
    let mut loss = 0.0;
    for (x, y) in batch {
        let a = params.pre_activation(x);
        let z = params.b2 + a.iter().zip(&params.w2).map(|(a, w)| a.max(0.0) * w).sum::<f64>();
        let t = if y.is_target() { 1.0 } else { 0.0 };
        loss += softplus(z) - t * z;
        let dz = (sigmoid(z) - t) * scale;
        g.b2 += dz;
        let mut da = vec![0.0; h];
        for k in 0..h {
            if a[k] > 0.0 {
                g.w2[k] += dz * a[k];
                da[k] = dz * params.w2[k];
                g.b1[k] += da[k];
            }
        }
        for (j, v) in x.iter() {
            let row = rows.entry(j).or_insert_with(|| vec![0.0; h]);
            for (gk, dk) in row.iter_mut().zip(&da) {
                *gk += v * dk;
            }
        }
    }
    g.rows = rows.into_iter().collect();
    (loss * scale, g)
}
