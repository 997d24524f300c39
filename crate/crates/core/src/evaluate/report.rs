//! CSV, JSON and SVG renderings of evaluation results. Undefined metric
//! cells are written as an em dash, never as 0.

use std::path::Path;

use super::benchmark::BenchmarkRecord;
use super::grid_search::GridSearchResult;
use super::metrics::{mean_defined, ConfusionMatrix, MetricsReport};
use super::roc::RocCurve;
use crate::error::{Error, Result};
use crate::models::Family;
use crate::plot::{line_chart, Series};

pub const UNDEFINED: &str = "\u{2014}";

pub fn fmt_value(v: f64) -> String {
    format!("{v:.4}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_value).unwrap_or_else(|| UNDEFINED.to_string())
}

pub(crate) fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn confusion_cells(cm: &ConfusionMatrix) -> Vec<String> {
    vec![cm.tp.to_string(), cm.tn.to_string(), cm.fp.to_string(), cm.fn_.to_string()]
}

fn metric_cells(m: &MetricsReport) -> Vec<String> {
    let mut v = vec![fmt_value(m.accuracy)];
    for c in &m.classes {
        v.push(fmt_opt(c.precision));
        v.push(fmt_opt(c.recall));
        v.push(fmt_opt(c.f1));
    }
    v
}

const METRIC_HEADER: [&str; 11] = [
    "tp", "tn", "fp", "fn", "accuracy", "precision_0", "recall_0", "f1_0", "precision_1", "recall_1", "f1_1",
];

/// One row per grid cell.
pub fn grid_table_csv(disaster_id: &str, results: &[GridSearchResult]) -> Result<String> {
    let mut rows = Vec::new();
    for r in results {
        for c in &r.cells {
            let folds: Vec<String> = c.cv.folds.iter().map(|f| fmt_value(f.metrics.accuracy)).collect();
            rows.push(vec![
                disaster_id.to_string(),
                r.family.key().to_string(),
                c.index.to_string(),
                c.params.clone(),
                fmt_value(c.cv.mean_accuracy),
                fmt_opt(c.cv.mean_f1),
                folds.join(";"),
                (c.index == r.best).to_string(),
            ]);
        }
    }
    csv_string(
        &["disaster", "family", "cell", "params", "mean_accuracy", "mean_f1_1", "fold_accuracy", "selected"],
        rows,
    )
}

/// One row per fold of every grid cell.
pub fn fold_table_csv(disaster_id: &str, results: &[GridSearchResult]) -> Result<String> {
    let mut rows = Vec::new();
    for r in results {
        for c in &r.cells {
            for f in &c.cv.folds {
                let mut row = vec![
                    disaster_id.to_string(),
                    r.family.key().to_string(),
                    c.index.to_string(),
                    f.fold.to_string(),
                    f.n_train.to_string(),
                    f.n_test.to_string(),
                ];
                row.extend(confusion_cells(&f.confusion));
                row.extend(metric_cells(&f.metrics));
                rows.push(row);
            }
        }
    }
    let mut header = vec!["disaster", "family", "cell", "fold", "n_train", "n_test"];
    header.extend(METRIC_HEADER);
    csv_string(&header, rows)
}

/// One row per evaluated split, e.g. `train` and `test`.
pub fn split_metrics_csv(rows: &[(&str, &ConfusionMatrix, &MetricsReport, Option<f64>)]) -> Result<String> {
    let rows = rows
        .iter()
        .map(|(name, cm, m, auc)| {
            let mut row = vec![name.to_string(), cm.total().to_string()];
            row.extend(confusion_cells(cm));
            row.extend(metric_cells(m));
            row.push(fmt_opt(*auc));
            row
        })
        .collect();
    let mut header = vec!["split", "n"];
    header.extend(METRIC_HEADER);
    header.push("auc");
    csv_string(&header, rows)
}

/// Accuracy and confusion-matrix metrics per benchmark record (no timings).
pub fn benchmark_csv(records: &[BenchmarkRecord]) -> Result<String> {
    let rows = records
        .iter()
        .map(|r| {
            let mut row = vec![
                r.disaster_id.clone(),
                r.family.key().to_string(),
                r.params.clone(),
                r.n_train.to_string(),
                r.n_test.to_string(),
            ];
            row.extend(confusion_cells(&r.confusion));
            row.extend(metric_cells(&r.metrics));
            row.push(fmt_opt(r.auc));
            row.push(fmt_value(r.majority_baseline));
            row
        })
        .collect();
    let mut header = vec!["disaster", "family", "params", "n_train", "n_test"];
    header.extend(METRIC_HEADER);
    header.extend(["auc", "majority_baseline"]);
    csv_string(&header, rows)
}

/// Wall-clock seconds per benchmark record. These vary run to run.
pub fn timing_csv(records: &[BenchmarkRecord]) -> Result<String> {
    let rows = records
        .iter()
        .map(|r| {
            vec![
                r.disaster_id.clone(),
                r.family.key().to_string(),
                format!("{:.6}", r.fit_seconds),
                format!("{:.6}", r.predict_seconds),
                format!("{:.6}", r.total_seconds()),
                format!("{:.6}", r.vectorize_seconds),
                fmt_value(r.accuracy),
            ]
        })
        .collect();
    csv_string(
        &["disaster", "family", "fit_seconds", "predict_seconds", "total_seconds", "vectorize_seconds", "accuracy"],
        rows,
    )
}

/// Disaster-by-family table of one metric with an average row. The average
/// skips undefined cells; the `skipped` row counts them.
pub fn metric_matrix_csv(
    records: &[BenchmarkRecord],
    disasters: &[String],
    metric: impl Fn(&BenchmarkRecord) -> Option<f64>,
) -> Result<String> {
    let mut families: Vec<Family> = records.iter().map(|r| r.family).collect();
    families.sort();
    families.dedup();
    let cell = |d: &str, f: Family| records.iter().find(|r| r.disaster_id == d && r.family == f).and_then(&metric);
    let mut rows = Vec::new();
    for d in disasters {
        let mut row = vec![d.clone()];
        row.extend(families.iter().map(|&f| fmt_opt(cell(d, f))));
        rows.push(row);
    }
    let mut avg = vec!["average".to_string()];
    let mut skipped = vec!["skipped".to_string()];
    for &f in &families {
        let (m, s) = mean_defined(disasters.iter().map(|d| cell(d, f)));
        avg.push(fmt_opt(m));
        skipped.push(s.to_string());
    }
    rows.push(avg);
    rows.push(skipped);
    let mut header = vec!["disaster".to_string()];
    header.extend(families.iter().map(|f| f.label().to_string()));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    csv_string(&header, rows)
}

/// ROC point lists, one block of rows per curve.
pub fn roc_csv(curves: &[(String, &RocCurve)]) -> Result<String> {
    let mut rows = Vec::new();
    for (name, c) in curves {
        for (i, &(fpr, tpr)) in c.points.iter().enumerate() {
            let threshold = if i == 0 { "inf".to_string() } else { format!("{:.6}", c.thresholds[i - 1]) };
            rows.push(vec![name.clone(), i.to_string(), format!("{fpr:.6}"), format!("{tpr:.6}"), threshold]);
        }
    }
    csv_string(&["curve", "point", "fpr", "tpr", "threshold"], rows)
}

/// ROC curves on one set of axes with the chance diagonal.
pub fn roc_svg(title: &str, curves: &[(String, &RocCurve)]) -> String {
    let labels: Vec<String> = curves.iter().map(|(n, c)| format!("{n} (AUC {:.2})", c.auc)).collect();
    let series: Vec<Series<'_>> = curves
        .iter()
        .zip(&labels)
        .map(|((_, c), label)| Series {
            name: label,
            points: c.points.clone(),
        })
        .collect();
    line_chart(title, "False positive rate", "True positive rate", (0.0, 1.0), (0.0, 1.0), &series, true)
}
