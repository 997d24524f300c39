//! Multinomial naive Bayes with additive smoothing.

use serde::{Deserialize, Serialize};

use super::TrainingSet;
use crate::error::{Error, Result};
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NaiveBayesConfig {
    /// Additive smoothing, `> 0`.
    pub alpha: f64,
}

impl Default for NaiveBayesConfig {
    fn default() -> Self {
        NaiveBayesConfig { alpha: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayes {
    pub config: NaiveBayesConfig,
    /// `ln P(y = c)` for classes 0 and 1.
    pub log_prior: [f64; 2],
    /// `ln P(term j | y = c)` per class.
    pub log_likelihood: [Vec<f64>; 2],
}

fn check_non_negative(x: &SparseVector) -> Result<()> {
    match x.iter().find(|&(_, v)| v < 0.0) {
        Some((index, value)) => Err(Error::NegativeFeature { index, value }),
        None => Ok(()),
    }
}

impl NaiveBayes {
    pub fn fit(ts: &TrainingSet, config: NaiveBayesConfig) -> Result<Self> {
        if !(config.alpha > 0.0 && config.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be > 0, got {}", config.alpha)));
        }
        let dim = ts.feature_dim();
        let mut mass = [vec![0.0; dim], vec![0.0; dim]];
        let mut count = [0usize; 2];
        for (x, y) in ts.iter() {
            check_non_negative(x)?;
            count[y.index()] += 1;
            for (j, v) in x.iter() {
                mass[y.index()][j] += v;
            }
        }
        let n = ts.len() as f64;
        let log_prior = [(count[0] as f64 / n).ln(), (count[1] as f64 / n).ln()];
        let log_likelihood = mass.map(|m| {
            let total: f64 = m.iter().sum();
            let denom = (total + config.alpha * dim as f64).ln();
            m.iter().map(|&w| (w + config.alpha).ln() - denom).collect()
        });
        Ok(NaiveBayes {
            config,
            log_prior,
            log_likelihood,
        })
    }

    /// `ln P(y=1|x) - ln P(y=0|x)`.
    pub fn log_odds(&self, x: &SparseVector) -> Result<f64> {
        check_non_negative(x)?;
        let mut s = self.log_prior[1] - self.log_prior[0];
        for (j, v) in x.iter() {
            s += v * (self.log_likelihood[1][j] - self.log_likelihood[0][j]);
        }
        Ok(s)
    }
}
