use std::path::{Path, PathBuf};

use log::{info, warn};

use super::{Cli, Command, RunConfig};
use crate::analytics::{write_bundle, GroupFigures};
use crate::corpus::{load_dataset, write_canonical_file, Dataset, LoadReport, Registry, GROUP_HURRICANES, GROUP_TYPES};
use crate::error::{Error, Result};
use crate::evaluate::report::{self, write_text};
use crate::evaluate::{
    benchmark, benchmark_split, confusion, grid_search, metrics, roc_curve, BenchmarkRecord, FittedPipeline,
    LabeledCorpus,
};
use crate::models::{Family, SavedModel};
use crate::plot::bar_chart;
use crate::rng::derive_seed;

/// The disasters and families a command applies to.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub disasters: Vec<String>,
    pub families: Vec<Family>,
    pub all_disasters: bool,
}

impl Selection {
    pub fn resolve(registry: &Registry, disaster: &str, family: &str) -> Result<Self> {
        let all_disasters = disaster == "all";
        let disasters = if all_disasters {
            registry.ids().map(str::to_string).collect()
        } else {
            registry.get(disaster)?;
            vec![disaster.to_string()]
        };
        let families = if family == "all" {
            Family::ALL.to_vec()
        } else {
            vec![family.parse()?]
        };
        Ok(Selection {
            disasters,
            families,
            all_disasters,
        })
    }
}

/// Runs one subcommand.
pub fn run(cli: &Cli) -> Result<()> {
    let cfg = cli.run_config()?;
    let registry = cfg.registry()?;
    let sel = Selection::resolve(&registry, &cli.disaster, &cli.family)?;
    match cli.command {
        Command::Ingest => ingest(&cfg, &registry, &sel),
        Command::Train => train(&cfg, &registry, &sel),
        Command::Gridsearch => gridsearch(&cfg, &registry, &sel),
        Command::Benchmark => run_benchmark(&cfg, &registry, &sel, cli.plots, cli.include_vectorize_time),
        Command::Report => analytics_report(&cfg, &registry, &sel, cli.plots),
    }
}

fn data_file(cfg: &RunConfig, registry: &Registry, id: &str) -> Result<PathBuf> {
    if let Some(p) = cfg.data.files.get(id) {
        return Ok(p.clone());
    }
    match &cfg.data.dir {
        Some(dir) => registry.discover_file(dir, id),
        None => Err(Error::Config("no corpus location: set data.dir, data.files, or --data".into())),
    }
}

fn load(cfg: &RunConfig, registry: &Registry, id: &str) -> Result<(Dataset, LoadReport)> {
    let path = data_file(cfg, registry, id)?;
    let (ds, rep) = load_dataset(&path, registry.get(id)?)?;
    if rep.rejected() > 0 {
        warn!("{}: rejected {} rows (lines {:?})", path.display(), rep.rejected(), rep.rejected_lines);
    }
    info!("{id}: loaded {} tweets from {}", ds.len(), path.display());
    Ok((ds, rep))
}

fn labeled(cfg: &RunConfig, ds: &Dataset) -> Result<LabeledCorpus> {
    let pre = cfg.preprocessor()?;
    LabeledCorpus::new(pre.process_all(&ds.tweets), ds.labels()?)
}

fn emit(path: &Path, text: &str) -> Result<()> {
    write_text(path, text)?;
    info!("wrote {}", path.display());
    Ok(())
}

fn ingest(cfg: &RunConfig, registry: &Registry, sel: &Selection) -> Result<()> {
    let dir = cfg.out_dir.join("ingest");
    let mut rows = Vec::new();
    let mut total = 0;
    for id in &sel.disasters {
        let (ds, rep) = load(cfg, registry, id)?;
        let path = dir.join(format!("{id}.csv"));
        write_canonical_file(&path, &ds)?;
        println!("{id}: {} tweets ({} rejected)", ds.len(), rep.rejected());
        total += ds.len();
        rows.push(vec![
            id.clone(),
            rep.layout.clone(),
            rep.rows_read.to_string(),
            rep.loaded.to_string(),
            rep.rejected_bad_label.to_string(),
            rep.rejected_empty_text.to_string(),
            rep.rejected_bad_need.to_string(),
            rep.rejected_wrong_disaster.to_string(),
            rep.unparseable_timestamp.to_string(),
            rep.unresolved_need.to_string(),
            rep.outside_window.to_string(),
        ]);
    }
    println!("total: {total} tweets");
    let csv = report::csv_string(
        &[
            "disaster",
            "layout",
            "rows_read",
            "loaded",
            "rejected_bad_label",
            "rejected_empty_text",
            "rejected_bad_need",
            "rejected_wrong_disaster",
            "unparseable_timestamp",
            "unresolved_need",
            "outside_window",
        ],
        rows,
    )?;
    emit(&dir.join("ingest_report.csv"), &csv)
}

fn train(cfg: &RunConfig, registry: &Registry, sel: &Selection) -> Result<()> {
    let seed = cfg.seed()?;
    let dir = cfg.out_dir.join("train");
    for id in &sel.disasters {
        let (ds, _) = load(cfg, registry, id)?;
        let corpus = labeled(cfg, &ds)?;
        let split = benchmark_split(&corpus, &cfg.protocol(false), seed)?;
        let train = corpus.subset(&split.train);
        let test = corpus.subset(&split.test);
        for &family in &sel.families {
            let pipeline = cfg.pipeline_for(family)?;
            let fitted = FittedPipeline::fit(&train, &pipeline, derive_seed(seed, "train-fit", family as u64))?;
            let train_scores = fitted.scores(&train.docs)?;
            let test_scores = fitted.scores(&test.docs)?;
            let decide = |s: &[f64]| s.iter().map(|&v| fitted.model.decide(v)).collect::<Vec<_>>();
            let train_cm = confusion(&decide(&train_scores), &train.labels)?;
            let test_cm = confusion(&decide(&test_scores), &test.labels)?;
            let train_m = metrics(&train_cm)?;
            let test_m = metrics(&test_cm)?;
            let train_auc = roc_curve(&train_scores, &train.labels).ok().map(|r| r.auc);
            let test_auc = roc_curve(&test_scores, &test.labels).ok().map(|r| r.auc);
            let stem = format!("{id}_{}", family.key());
            let saved = SavedModel::new(fitted.model.clone(), fitted.vectorizer.vocabulary(), pipeline.features);
            saved.save(&dir.join(format!("{stem}.json")))?;
            let csv = report::split_metrics_csv(&[
                ("train", &train_cm, &train_m, train_auc),
                ("test", &test_cm, &test_m, test_auc),
            ])?;
            emit(&dir.join(format!("{stem}_metrics.csv")), &csv)?;
            println!(
                "{id} {}: train accuracy {} test accuracy {}",
                family.label(),
                report::fmt_value(train_m.accuracy),
                report::fmt_value(test_m.accuracy)
            );
        }
    }
    Ok(())
}

fn gridsearch(cfg: &RunConfig, registry: &Registry, sel: &Selection) -> Result<()> {
    let seed = cfg.seed()?;
    let grid = cfg.grid()?;
    let dir = cfg.out_dir.join("gridsearch");
    for id in &sel.disasters {
        let (ds, _) = load(cfg, registry, id)?;
        let corpus = labeled(cfg, &ds)?;
        for &family in &sel.families {
            let base = cfg.pipeline_for(family)?.features;
            let result = grid_search(&corpus, family, &grid, &base, cfg.split.k, seed, cfg.grids.selection)?;
            let stem = format!("{id}_{}", family.key());
            let results = std::slice::from_ref(&result);
            emit(&dir.join(format!("{stem}_grid.csv")), &report::grid_table_csv(id, results)?)?;
            emit(&dir.join(format!("{stem}_folds.csv")), &report::fold_table_csv(id, results)?)?;
            let best = result.best_cell();
            let summary = serde_json::json!({
                "disaster": id,
                "family": family.key(),
                "selection": result.metric,
                "cell": best.index,
                "params": best.params,
                "mean_accuracy": best.cv.mean_accuracy,
                "mean_f1": best.cv.mean_f1,
                "pipeline": best.pipeline,
            });
            emit(&dir.join(format!("{stem}_best.json")), &(serde_json::to_string_pretty(&summary)? + "\n"))?;
            println!(
                "{id} {}: best [{}] mean accuracy {}",
                family.label(),
                best.params,
                report::fmt_value(best.cv.mean_accuracy)
            );
        }
    }
    Ok(())
}

fn run_benchmark(cfg: &RunConfig, registry: &Registry, sel: &Selection, plots: bool, include_vectorize: bool) -> Result<()> {
    let seed = cfg.seed()?;
    let protocol = cfg.protocol(include_vectorize);
    let pipelines = sel
        .families
        .iter()
        .map(|&f| cfg.pipeline_for(f))
        .collect::<Result<Vec<_>>>()?;
    let dir = cfg.out_dir.join("benchmark");
    let mut records: Vec<BenchmarkRecord> = Vec::new();
    for id in &sel.disasters {
        let (ds, _) = load(cfg, registry, id)?;
        let corpus = labeled(cfg, &ds)?;
        let recs = benchmark(&corpus, id, &pipelines, &protocol, seed)?;
        let curves: Vec<(String, &crate::evaluate::RocCurve)> = recs
            .iter()
            .filter_map(|r| r.roc.as_ref().map(|c| (r.family.label().to_string(), c)))
            .collect();
        emit(&dir.join("roc").join(format!("{id}.csv")), &report::roc_csv(&curves)?)?;
        if plots {
            let svg = report::roc_svg(&format!("ROC: {}", ds.spec.name), &curves);
            emit(&dir.join("roc").join(format!("{id}.svg")), &svg)?;
        }
        for r in &recs {
            println!(
                "{id} {}: accuracy {} auc {} fit {:.3}s predict {:.3}s",
                r.family.label(),
                report::fmt_value(r.accuracy),
                report::fmt_opt(r.auc),
                r.fit_seconds,
                r.predict_seconds
            );
        }
        records.extend(recs);
    }
    let d = &sel.disasters;
    emit(&dir.join("benchmark.csv"), &report::benchmark_csv(&records)?)?;
    emit(&dir.join("timing.csv"), &report::timing_csv(&records)?)?;
    emit(&dir.join("accuracy.csv"), &report::metric_matrix_csv(&records, d, |r| Some(r.accuracy))?)?;
    emit(&dir.join("auc.csv"), &report::metric_matrix_csv(&records, d, |r| r.auc)?)?;
    for (name, pick) in [
        ("precision.csv", (|r: &BenchmarkRecord| r.metrics.target().precision) as fn(&BenchmarkRecord) -> Option<f64>),
        ("recall.csv", |r| r.metrics.target().recall),
        ("f1.csv", |r| r.metrics.target().f1),
    ] {
        emit(&dir.join(name), &report::metric_matrix_csv(&records, d, pick)?)?;
    }
    if plots {
        let labels: Vec<String> = sel.families.iter().map(|f| f.label().to_string()).collect();
        let mean = |f: Family, v: fn(&BenchmarkRecord) -> f64| {
            let xs: Vec<f64> = records.iter().filter(|r| r.family == f).map(v).collect();
            xs.iter().sum::<f64>() / xs.len().max(1) as f64
        };
        let seconds = sel.families.iter().map(|&f| mean(f, BenchmarkRecord::total_seconds)).collect();
        let accuracy = sel.families.iter().map(|&f| mean(f, |r| r.accuracy)).collect();
        emit(
            &dir.join("timing.svg"),
            &bar_chart("Mean fit + predict time", "seconds", &labels, &[("seconds", seconds)]),
        )?;
        emit(
            &dir.join("accuracy.svg"),
            &bar_chart("Mean test accuracy", "accuracy", &labels, &[("accuracy", accuracy)]),
        )?;
    }
    Ok(())
}

fn analytics_report(cfg: &RunConfig, registry: &Registry, sel: &Selection, plots: bool) -> Result<()> {
    let mut loaded = Vec::new();
    for id in &sel.disasters {
        loaded.push(load(cfg, registry, id)?.0);
    }
    let mut groups = Vec::new();
    for (name, figs) in [(GROUP_TYPES, GroupFigures::TYPES), (GROUP_HURRICANES, GroupFigures::HURRICANES)] {
        let Ok(members) = registry.group(name) else {
            continue;
        };
        let datasets: Vec<&Dataset> = members
            .iter()
            .filter_map(|m| loaded.iter().find(|d| &d.spec.disaster_id == m))
            .collect();
        groups.push((figs, datasets));
    }
    let dir = cfg.out_dir.join("report");
    let bundle = write_bundle(&dir, &groups, sel.all_disasters, plots)?;
    for (id, s) in &bundle.disasters {
        println!(
            "{id}: {} tweets, negative share {}, modal need {}, before/during/after {}/{}/{}",
            s.tweets,
            report::fmt_opt(s.negative_share),
            s.modal_need.as_deref().unwrap_or(report::UNDEFINED),
            s.before,
            s.during,
            s.after
        );
        if s.missing_timestamp + s.outside_window > 0 {
            println!(
                "{id}: {} tweets without timestamp and {} outside the window left out of the daily series",
                s.missing_timestamp, s.outside_window
            );
        }
    }
    println!("wrote {} files to {}", bundle.files.len(), dir.display());
    if bundle.errors.is_empty() {
        Ok(())
    } else {
        let msgs: Vec<String> = bundle.errors.iter().map(|(f, e)| format!("{f}: {e}")).collect();
        Err(Error::Data(msgs.join("; ")))
    }
}
