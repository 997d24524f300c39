//! ROC curves by threshold sweep, with tied scores advancing as one group.

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    /// `(fpr, tpr)` from `(0, 0)` to `(1, 1)`.
    pub points: Vec<(f64, f64)>,
    /// Score threshold reached at each point after the first: samples with
    /// `score >= threshold` are predicted 1.
    pub thresholds: Vec<f64>,
    pub auc: f64,
}

pub fn roc_curve(scores: &[f64], truth: &[Label]) -> Result<RocCurve> {
    if scores.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: truth.len(),
        });
    }
    if let Some(s) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite score {s}")));
    }
    let n_pos = truth.iter().filter(|l| l.is_target()).count();
    let n_neg = truth.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedAuc);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

    let mut points = vec![(0.0, 0.0)];
    let mut thresholds = Vec::new();
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut auc = 0.0;
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if truth[order[i]].is_target() {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        let (x0, y0) = *points.last().expect("starts non-empty");
        let x = fp as f64 / n_neg as f64;
        let y = tp as f64 / n_pos as f64;
        auc += (x - x0) * (y + y0) / 2.0;
        points.push((x, y));
        thresholds.push(s);
    }
    Ok(RocCurve { points, thresholds, auc })
}

/// Trapezoidal area under a point list.
pub fn trapezoid_area(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0)
        .sum()
}
