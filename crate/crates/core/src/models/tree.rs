//! CART trees with Gini impurity over sparse features.
//!
//! Features absent from a sparse vector are zero. At each node the zero
//! valued samples form one bucket that takes its place in the sorted value
//! order, so a threshold can separate negatives, zeros and positives.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::TrainingSet;
use crate::error::{Error, Result};
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecisionTreeConfig {
    /// `None` grows until leaves are pure or cannot be split.
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
}

impl Default for DecisionTreeConfig {
    fn default() -> Self {
        DecisionTreeConfig {
            max_depth: None,
            min_leaf: 1,
        }
    }
}

impl DecisionTreeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_depth == Some(0) {
            return Err(Error::InvalidParameter("max_depth must be >= 1".into()));
        }
        if self.min_leaf == 0 {
            return Err(Error::InvalidParameter("min_leaf must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Node {
    Leaf {
        /// Weighted fraction of class-1 samples that reached this leaf.
        score: f64,
    },
    Split {
        feature: usize,
        /// Samples with `x[feature] <= threshold` go left.
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub config: DecisionTreeConfig,
    /// Node 0 is the root.
    pub nodes: Vec<Node>,
}

/// How many features each split may inspect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum FeatureSampling {
    All,
    /// Draw this many features among those that vary inside the node.
    Subset(usize),
}

struct Builder<'a, R> {
    ts: &'a TrainingSet,
    weights: &'a [f64],
    config: DecisionTreeConfig,
    sampling: FeatureSampling,
    rng: &'a mut R,
    nodes: Vec<Node>,
}

#[derive(Clone, Copy)]
struct Totals {
    pos: f64,
    neg: f64,
    count: usize,
}

impl Totals {
    fn weight(&self) -> f64 {
        self.pos + self.neg
    }

    fn gini_mass(&self) -> f64 {
        // Weighted impurity, W * gini.
        let w = self.weight();
        if w <= 0.0 {
            return 0.0;
        }
        let p = self.pos / w;
        w * 2.0 * p * (1.0 - p)
    }
}

struct Candidate {
    feature: usize,
    threshold: f64,
    /// Weighted child impurity; lower is better.
    impurity: f64,
}

impl<R: Rng> Builder<'_, R> {
    fn totals(&self, samples: &[usize]) -> Totals {
        let mut t = Totals {
            pos: 0.0,
            neg: 0.0,
            count: samples.len(),
        };
        for &i in samples {
            if self.ts.y()[i].is_target() {
                t.pos += self.weights[i];
            } else {
                t.neg += self.weights[i];
            }
        }
        t
    }

    fn leaf(&mut self, totals: Totals) -> usize {
        let score = if totals.weight() > 0.0 {
            totals.pos / totals.weight()
        } else {
            0.0
        };
        self.nodes.push(Node::Leaf { score });
        self.nodes.len() - 1
    }

    fn build(&mut self, samples: Vec<usize>, depth: usize) -> usize {
        let totals = self.totals(&samples);
        let pure = totals.pos == 0.0 || totals.neg == 0.0;
        let depth_reached = self.config.max_depth.is_some_and(|d| depth >= d);
        if pure || depth_reached || totals.count < 2 * self.config.min_leaf {
            return self.leaf(totals);
        }
        let Some(best) = self.best_split(&samples, totals) else {
            return self.leaf(totals);
        };
        let (left, right): (Vec<usize>, Vec<usize>) = samples
            .iter()
            .partition(|&&i| self.ts.x()[i].get(best.feature) <= best.threshold);
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { score: 0.0 });
        let l = self.build(left, depth + 1);
        let r = self.build(right, depth + 1);
        self.nodes[id] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left: l,
            right: r,
        };
        id
    }

    fn best_split(&mut self, samples: &[usize], totals: Totals) -> Option<Candidate> {
        // (feature, value, sample) for every stored non-zero in the node.
        let mut triples: Vec<(usize, f64, usize)> = Vec::new();
        for &i in samples {
            triples.extend(self.ts.x()[i].iter().filter(|&(_, v)| v != 0.0).map(|(j, v)| (j, v, i)));
        }
        triples.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));

        let mut groups: Vec<&[(usize, f64, usize)]> = Vec::new();
        for g in triples.chunk_by(|a, b| a.0 == b.0) {
            let varies = g.len() < samples.len() || g.first().map(|t| t.1) != g.last().map(|t| t.1);
            if varies {
                groups.push(g);
            }
        }
        if let FeatureSampling::Subset(m) = self.sampling {
            if m < groups.len() {
                let mut picked = sample(self.rng, groups.len(), m).into_vec();
                picked.sort_unstable();
                groups = picked.into_iter().map(|k| groups[k]).collect();
            }
        }

        let mut best: Option<Candidate> = None;
        for g in groups {
            if let Some(c) = self.scan_feature(g, totals) {
                if best.as_ref().is_none_or(|b| c.impurity < b.impurity) {
                    best = Some(c);
                }
            }
        }
        best
    }

    /// Best threshold for one feature given its sorted non-zero entries.
    fn scan_feature(&self, entries: &[(usize, f64, usize)], totals: Totals) -> Option<Candidate> {
        let feature = entries[0].0;
        // Buckets of equal value, in ascending order, with the zero bucket merged in.
        let mut buckets: Vec<(f64, Totals)> = Vec::new();
        let mut nonzero = Totals {
            pos: 0.0,
            neg: 0.0,
            count: 0,
        };
        for run in entries.chunk_by(|a, b| a.1 == b.1) {
            let mut t = Totals {
                pos: 0.0,
                neg: 0.0,
                count: run.len(),
            };
            for &(_, _, i) in run {
                if self.ts.y()[i].is_target() {
                    t.pos += self.weights[i];
                } else {
                    t.neg += self.weights[i];
                }
            }
            nonzero.pos += t.pos;
            nonzero.neg += t.neg;
            nonzero.count += t.count;
            buckets.push((run[0].1, t));
        }
        let zero_count = totals.count - nonzero.count;
        if zero_count > 0 {
            let zero = Totals {
                pos: (totals.pos - nonzero.pos).max(0.0),
                neg: (totals.neg - nonzero.neg).max(0.0),
                count: zero_count,
            };
            let at = buckets.partition_point(|b| b.0 < 0.0);
            buckets.insert(at, (0.0, zero));
        }

        let min_leaf = self.config.min_leaf;
        let mut left = Totals {
            pos: 0.0,
            neg: 0.0,
            count: 0,
        };
        let mut best: Option<Candidate> = None;
        for k in 0..buckets.len().saturating_sub(1) {
            let t = buckets[k].1;
            left.pos += t.pos;
            left.neg += t.neg;
            left.count += t.count;
            let right = Totals {
                pos: (totals.pos - left.pos).max(0.0),
                neg: (totals.neg - left.neg).max(0.0),
                count: totals.count - left.count,
            };
            if left.count < min_leaf || right.count < min_leaf {
                continue;
            }
            let impurity = left.gini_mass() + right.gini_mass();
            if best.as_ref().is_none_or(|b| impurity < b.impurity) {
                best = Some(Candidate {
                    feature,
                    threshold: 0.5 * (buckets[k].0 + buckets[k + 1].0),
                    impurity,
                });
            }
        }
        best
    }
}

impl DecisionTree {
    pub fn fit(ts: &TrainingSet, config: DecisionTreeConfig) -> Result<Self> {
        let weights = vec![1.0; ts.len()];
        let mut rng = crate::rng::stream(0, "decision-tree");
        Self::fit_weighted(ts, &weights, config, FeatureSampling::All, &mut rng)
    }

    /// Samples with zero weight are left out; the others count with their weight.
    pub(crate) fn fit_weighted<R: Rng>(
        ts: &TrainingSet,
        weights: &[f64],
        config: DecisionTreeConfig,
        sampling: FeatureSampling,
        rng: &mut R,
    ) -> Result<Self> {
        config.validate()?;
        let samples: Vec<usize> = (0..ts.len()).filter(|&i| weights[i] > 0.0).collect();
        let mut b = Builder {
            ts,
            weights,
            config,
            sampling,
            rng,
            nodes: Vec::new(),
        };
        b.build(samples, 0);
        Ok(DecisionTree { config, nodes: b.nodes })
    }

    pub fn score(&self, x: &SparseVector) -> f64 {
        let mut id = 0;
        loop {
            match self.nodes[id] {
                Node::Leaf { score } => return score,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => id = if x.get(feature) <= threshold { left } else { right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], id: usize) -> usize {
            match nodes[id] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }
}
