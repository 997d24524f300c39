//! Eight classifier families behind one fit / score / predict contract.

mod adaboost;
mod forest;
mod grid;
mod knn;
mod logistic;
mod mlp;
mod naive_bayes;
mod persist;
mod svm;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use adaboost::{AdaBoost, AdaBoostConfig, Halt, Stump};
pub use forest::{MaxFeatures, RandomForest, RandomForestConfig};
pub use grid::{GridCell, HyperGrid, ParamValue};
pub use knn::{cosine_distance, Knn, KnnConfig};
pub use logistic::{loss_and_gradient, sigmoid, softplus, LogisticRegression, LogisticRegressionConfig, LossGradient, Penalty};
pub use mlp::{batch_loss_and_gradient, Mlp, MlpConfig, MlpParams};
pub use naive_bayes::{NaiveBayes, NaiveBayesConfig};
pub use persist::{SavedModel, MODEL_FORMAT_VERSION};
pub use svm::{primal_objective, LinearSvm, LinearSvmConfig};
pub use tree::{DecisionTree, DecisionTreeConfig, Node};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Nb,
    Lr,
    Dt,
    Svm,
    Knn,
    Rf,
    Adaboost,
    #[serde(alias = "mnn")]
    Mlp,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Nb,
        Family::Lr,
        Family::Dt,
        Family::Svm,
        Family::Knn,
        Family::Rf,
        Family::Adaboost,
        Family::Mlp,
    ];

    /// Lowercase identifier used in configs and file names.
    pub fn key(self) -> &'static str {
        match self {
            Family::Nb => "nb",
            Family::Lr => "lr",
            Family::Dt => "dt",
            Family::Svm => "svm",
            Family::Knn => "knn",
            Family::Rf => "rf",
            Family::Adaboost => "adaboost",
            Family::Mlp => "mlp",
        }
    }

    /// Column label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Family::Nb => "NB",
            Family::Lr => "LR",
            Family::Dt => "DT",
            Family::Svm => "SVM",
            Family::Knn => "KNN",
            Family::Rf => "RF",
            Family::Adaboost => "AdaBoost",
            Family::Mlp => "MNN",
        }
    }

    /// Scores above this value predict label 1.
    pub fn threshold(self) -> f64 {
        match self {
            Family::Nb | Family::Svm | Family::Adaboost => 0.0,
            Family::Lr | Family::Dt | Family::Knn | Family::Rf | Family::Mlp => 0.5,
        }
    }

    /// Whether scores are probabilities in `[0, 1]`.
    pub fn is_probabilistic(self) -> bool {
        self.threshold() == 0.5
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let k = s.trim().to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.key() == k || f.label().to_ascii_lowercase() == k)
            .ok_or_else(|| Error::Config(format!("unknown model family {s:?}")))
    }
}

/// Labelled sparse vectors ready for fitting.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    x: Vec<SparseVector>,
    y: Vec<Label>,
    feature_dim: usize,
}

impl TrainingSet {
    pub fn new(x: Vec<SparseVector>, y: Vec<Label>, feature_dim: usize) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        if x.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a training set needs at least 2 samples, got {}",
                x.len()
            )));
        }
        if !(y.contains(&Label::Positive) && y.contains(&Label::Negative)) {
            return Err(Error::SingleClass);
        }
        for v in &x {
            v.check_dim(feature_dim)?;
        }
        Ok(TrainingSet { x, y, feature_dim })
    }

    pub fn x(&self) -> &[SparseVector] {
        &self.x
    }

    pub fn y(&self) -> &[Label] {
        &self.y
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SparseVector, Label)> {
        self.x.iter().zip(self.y.iter().copied())
    }

    /// Sample counts indexed by label.
    pub fn class_counts(&self) -> [usize; 2] {
        let mut c = [0; 2];
        for y in &self.y {
            c[y.index()] += 1;
        }
        c
    }
}

/// Hyperparameters for one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ModelConfig {
    Nb(NaiveBayesConfig),
    Lr(LogisticRegressionConfig),
    Dt(DecisionTreeConfig),
    Svm(LinearSvmConfig),
    Knn(KnnConfig),
    Rf(RandomForestConfig),
    Adaboost(AdaBoostConfig),
    #[serde(alias = "mnn")]
    Mlp(MlpConfig),
}

impl ModelConfig {
    pub fn default_for(family: Family) -> Self {
        match family {
            Family::Nb => ModelConfig::Nb(Default::default()),
            Family::Lr => ModelConfig::Lr(Default::default()),
            Family::Dt => ModelConfig::Dt(Default::default()),
            Family::Svm => ModelConfig::Svm(Default::default()),
            Family::Knn => ModelConfig::Knn(Default::default()),
            Family::Rf => ModelConfig::Rf(Default::default()),
            Family::Adaboost => ModelConfig::Adaboost(Default::default()),
            Family::Mlp => ModelConfig::Mlp(Default::default()),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            ModelConfig::Nb(_) => Family::Nb,
            ModelConfig::Lr(_) => Family::Lr,
            ModelConfig::Dt(_) => Family::Dt,
            ModelConfig::Svm(_) => Family::Svm,
            ModelConfig::Knn(_) => Family::Knn,
            ModelConfig::Rf(_) => Family::Rf,
            ModelConfig::Adaboost(_) => Family::Adaboost,
            ModelConfig::Mlp(_) => Family::Mlp,
        }
    }

    /// Checks each hyperparameter against its domain.
    pub fn validate(&self) -> Result<()> {
        fn positive(name: &str, v: f64) -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")))
            }
        }
        fn at_least_one(name: &str, v: usize) -> Result<()> {
            if v >= 1 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be >= 1")))
            }
        }
        match self {
            ModelConfig::Nb(c) => positive("alpha", c.alpha),
            ModelConfig::Lr(c) => {
                positive("c", c.c)?;
                if let Some(lr) = c.lr {
                    positive("lr", lr)?;
                }
                Ok(())
            }
            ModelConfig::Dt(c) => c.validate(),
            ModelConfig::Svm(c) => {
                positive("c", c.c)?;
                positive("bias_feature", c.bias_feature)?;
                at_least_one("epochs", c.epochs)
            }
            ModelConfig::Knn(c) => at_least_one("k", c.k),
            ModelConfig::Rf(c) => {
                at_least_one("n_trees", c.n_trees)?;
                DecisionTreeConfig {
                    max_depth: c.max_depth,
                    min_leaf: c.min_leaf,
                }
                .validate()
            }
            ModelConfig::Adaboost(c) => at_least_one("n_rounds", c.n_rounds),
            ModelConfig::Mlp(c) => {
                at_least_one("hidden", c.hidden)?;
                at_least_one("batch_size", c.batch_size)?;
                positive("lr", c.lr)
            }
        }
    }

    /// Compact `name=value` rendering of the hyperparameters, in field order.
    pub fn describe(&self) -> String {
        let value = serde_json::to_value(self).unwrap_or_default();
        let mut parts = Vec::new();
        if let serde_json::Value::Object(map) = value {
            for (k, v) in map {
                if k != "family" {
                    parts.push(format!("{k}={v}"));
                }
            }
        }
        parts.join(" ")
    }
}

/// Learned state of a fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "state", rename_all = "lowercase")]
pub enum FittedModel {
    Nb(NaiveBayes),
    Lr(LogisticRegression),
    Dt(DecisionTree),
    Svm(LinearSvm),
    Knn(Knn),
    Rf(RandomForest),
    Adaboost(AdaBoost),
    Mlp(Mlp),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    pub seed: u64,
    pub feature_dim: usize,
    pub model: FittedModel,
}

/// Fits the family selected by `config`. Deterministic in `(ts, config, seed)`.
pub fn fit(ts: &TrainingSet, config: &ModelConfig, seed: u64) -> Result<ClassifierModel> {
    config.validate()?;
    let model = match *config {
        ModelConfig::Nb(c) => FittedModel::Nb(NaiveBayes::fit(ts, c)?),
        ModelConfig::Lr(c) => FittedModel::Lr(LogisticRegression::fit(ts, c)?),
        ModelConfig::Dt(c) => FittedModel::Dt(DecisionTree::fit(ts, c)?),
        ModelConfig::Svm(c) => FittedModel::Svm(LinearSvm::fit(ts, c, seed)?),
        ModelConfig::Knn(c) => FittedModel::Knn(Knn::fit(ts, c)?),
        ModelConfig::Rf(c) => FittedModel::Rf(RandomForest::fit(ts, c, seed)?),
        ModelConfig::Adaboost(c) => FittedModel::Adaboost(AdaBoost::fit(ts, c)?),
        ModelConfig::Mlp(c) => FittedModel::Mlp(Mlp::fit(ts, c, seed)?),
    };
    Ok(ClassifierModel {
        seed,
        feature_dim: ts.feature_dim(),
        model,
    })
}

impl ClassifierModel {
    pub fn family(&self) -> Family {
        match &self.model {
            FittedModel::Nb(_) => Family::Nb,
            FittedModel::Lr(_) => Family::Lr,
            FittedModel::Dt(_) => Family::Dt,
            FittedModel::Svm(_) => Family::Svm,
            FittedModel::Knn(_) => Family::Knn,
            FittedModel::Rf(_) => Family::Rf,
            FittedModel::Adaboost(_) => Family::Adaboost,
            FittedModel::Mlp(_) => Family::Mlp,
        }
    }

    pub fn config(&self) -> ModelConfig {
        match &self.model {
            FittedModel::Nb(m) => ModelConfig::Nb(m.config),
            FittedModel::Lr(m) => ModelConfig::Lr(m.config),
            FittedModel::Dt(m) => ModelConfig::Dt(m.config),
            FittedModel::Svm(m) => ModelConfig::Svm(m.config),
            FittedModel::Knn(m) => ModelConfig::Knn(m.config),
            FittedModel::Rf(m) => ModelConfig::Rf(m.config),
            FittedModel::Adaboost(m) => ModelConfig::Adaboost(m.config),
            FittedModel::Mlp(m) => ModelConfig::Mlp(m.config),
        }
    }

    pub fn threshold(&self) -> f64 {
        self.family().threshold()
    }

    /// Real-valued confidence in label 1.
    pub fn score(&self, x: &SparseVector) -> Result<f64> {
        x.check_dim(self.feature_dim)?;
        Ok(match &self.model {
            FittedModel::Nb(m) => m.log_odds(x)?,
            FittedModel::Lr(m) => m.probability(x),
            FittedModel::Dt(m) => m.score(x),
            FittedModel::Svm(m) => m.margin(x),
            FittedModel::Knn(m) => m.score(x),
            FittedModel::Rf(m) => m.score(x),
            FittedModel::Adaboost(m) => m.score(x),
            FittedModel::Mlp(m) => m.score(x),
        })
    }

    /// Label 1 iff the score exceeds the family threshold.
    pub fn predict(&self, x: &SparseVector) -> Result<Label> {
        Ok(self.decide(self.score(x)?))
    }

    pub fn decide(&self, score: f64) -> Label {
        Label::from_target(score > self.threshold())
    }

    pub fn score_all(&self, xs: &[SparseVector]) -> Result<Vec<f64>> {
        use rayon::prelude::*;
        xs.par_iter().map(|x| self.score(x)).collect()
    }

    pub fn predict_all(&self, xs: &[SparseVector]) -> Result<Vec<Label>> {
        Ok(self.score_all(xs)?.into_iter().map(|s| self.decide(s)).collect())
    }
}
