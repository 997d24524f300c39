//! Random forest: bootstrapped CART trees with per-split feature sampling.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{DecisionTree, DecisionTreeConfig, FeatureSampling};
use super::TrainingSet;
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::rng::substream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeatures {
    /// `ceil(sqrt(V))` features per split.
    Sqrt,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomForestConfig {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    pub max_features: MaxFeatures,
    pub bootstrap: bool,
}

impl Default for RandomForestConfig {
    fn default() -> Self {
        RandomForestConfig {
            n_trees: 100,
            max_depth: None,
            min_leaf: 1,
            max_features: MaxFeatures::Sqrt,
            bootstrap: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub config: RandomForestConfig,
    pub trees: Vec<DecisionTree>,
}

impl RandomForest {
    pub fn fit(ts: &TrainingSet, config: RandomForestConfig, seed: u64) -> Result<Self> {
        if config.n_trees == 0 {
            return Err(Error::InvalidParameter("n_trees must be >= 1".into()));
        }
        let tree_config = DecisionTreeConfig {
            max_depth: config.max_depth,
            min_leaf: config.min_leaf,
        };
        tree_config.validate()?;
        let sampling = match config.max_features {
            MaxFeatures::All => FeatureSampling::All,
            MaxFeatures::Sqrt => FeatureSampling::Subset(((ts.feature_dim() as f64).sqrt().ceil() as usize).max(1)),
        };
        let n = ts.len();
        let trees = (0..config.n_trees)
            .into_par_iter()
            .map(|t| {
                let mut rng = substream(seed, "random-forest", t as u64);
                let mut weights = vec![0.0; n];
                if config.bootstrap {
                    for _ in 0..n {
                        weights[rng.gen_range(0..n)] += 1.0;
                    }
                } else {
                    weights.fill(1.0);
                }
                DecisionTree::fit_weighted(ts, &weights, tree_config, sampling, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RandomForest { config, trees })
    }

    /// Mean of the tree scores.
    pub fn score(&self, x: &SparseVector) -> f64 {
        self.trees.iter().map(|t| t.score(x)).sum::<f64>() / self.trees.len() as f64
    }
}
