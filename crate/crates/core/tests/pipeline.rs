mod common;

use std::time::Instant;

use disaster_sentiment::analytics::{write_bundle, GroupFigures};
use disaster_sentiment::cli::RunConfig;
use disaster_sentiment::corpus::synthetic::{disaster_like, SyntheticParams};
use disaster_sentiment::corpus::{load_dataset, Dataset, Registry, GROUP_TYPES};
use disaster_sentiment::evaluate::{benchmark, majority_baseline_accuracy, LabeledCorpus};
use disaster_sentiment::features::Vectorizer;
use disaster_sentiment::models::{fit, Family, KnnConfig, ModelConfig, TrainingSet};

fn labeled(ds: &Dataset) -> LabeledCorpus {
    let pre = RunConfig::default().preprocessor().unwrap();
    LabeledCorpus::new(pre.process_all(&ds.tweets), ds.labels().unwrap()).unwrap()
}

#[test]
fn files_to_benchmark_and_figures() {
    let data = tempfile::tempdir().unwrap();
    common::write_synthetic_corpus(data.path(), 300, 11);
    let registry = Registry::builtin();
    let files = registry.discover_files(data.path()).unwrap();
    let types: Vec<Dataset> = registry
        .group(GROUP_TYPES)
        .unwrap()
        .iter()
        .map(|id| load_dataset(&files[id], registry.get(id).unwrap()).unwrap().0)
        .collect();

    let cfg = RunConfig::default();
    let pipelines: Vec<_> = Family::ALL.iter().map(|&f| cfg.pipeline_for(f).unwrap()).collect();
    let harvey = types.iter().find(|d| d.spec.disaster_id == "harvey_2017").unwrap();
    let records = benchmark(&labeled(harvey), "harvey_2017", &pipelines, &cfg.protocol(false), 5).unwrap();
    assert_eq!(records.len(), 8);
    for r in &records {
        assert!(r.accuracy > r.majority_baseline, "{:?} {} <= {}", r.family, r.accuracy, r.majority_baseline);
        assert_eq!(r.n_train + r.n_test, harvey.len());
    }

    let out = tempfile::tempdir().unwrap();
    let group = vec![(GroupFigures::for_group(GROUP_TYPES).unwrap(), types.iter().collect())];
    let bundle = write_bundle(out.path(), &group, true, true).unwrap();
    assert!(bundle.errors.is_empty(), "{:?}", bundle.errors);
    assert!(out.path().join("fig2.csv").exists());
    assert_eq!(bundle.disasters.len(), 5);
}

/// Median wall time of `f` over `reps` runs.
fn median_seconds(reps: usize, mut f: impl FnMut()) -> f64 {
    let mut t: Vec<f64> = (0..reps)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_secs_f64()
        })
        .collect();
    t.sort_by(f64::total_cmp);
    t[reps / 2]
}

#[test]
fn knn_prediction_time_grows_linearly_with_training_size() {
    let registry = Registry::builtin();
    let params = SyntheticParams {
        n_docs: 4_600,
        ..SyntheticParams::default()
    };
    let corpus = labeled(&disaster_like(registry.get("dorian_2019").unwrap(), &params, 9));
    let train_all = corpus.subset(&(0..4_000).collect::<Vec<_>>());
    let test = corpus.subset(&(4_000..4_600).collect::<Vec<_>>());
    let vectorizer = Vectorizer::fit(&train_all.docs, Default::default()).unwrap();
    let x = vectorizer.transform_all(&train_all.docs);
    let queries = vectorizer.transform_all(&test.docs);

    let sizes = [1_000usize, 2_000, 4_000];
    let times: Vec<f64> = sizes
        .iter()
        .map(|&n| {
            let ts = TrainingSet::new(x[..n].to_vec(), train_all.labels[..n].to_vec(), vectorizer.dim()).unwrap();
            let model = fit(&ts, &ModelConfig::Knn(KnnConfig::default()), 0).unwrap();
            median_seconds(5, || {
                std::hint::black_box(model.score_all(&queries).unwrap());
            })
        })
        .collect();

    // Least-squares slope of log time against log size.
    let lx: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ly: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / 3.0, ly.iter().sum::<f64>() / 3.0);
    let slope = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((0.6..=1.5).contains(&slope), "slope {slope:.2} from times {times:?}");
    assert!(majority_baseline_accuracy(&train_all.labels, &test.labels) < 1.0);
}
