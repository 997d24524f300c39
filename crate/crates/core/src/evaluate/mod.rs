//! Metrics, ROC analysis, cross-validation, grid search and benchmarking.

mod benchmark;
mod cv;
mod grid_search;
mod metrics;
pub mod report;
mod roc;

pub use benchmark::{benchmark, benchmark_split, BenchmarkProtocol, BenchmarkRecord};
pub use cv::{cross_validate, cv_folds, CvResult, FittedPipeline, FoldReport, LabeledCorpus, PipelineConfig};
pub use grid_search::{grid_search, CellResult, GridSearchResult, SelectionMetric};
pub use metrics::{
    confusion, majority_baseline_accuracy, mean_defined, metrics, ClassMetrics, ConfusionMatrix, MetricsReport,
};
pub use roc::{roc_curve, trapezoid_area, RocCurve};

#[cfg(test)]
mod tests;
