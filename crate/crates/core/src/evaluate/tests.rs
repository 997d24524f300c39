use std::sync::atomic::AtomicUsize;

use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::Rng;

use super::cv::cross_validate_folds;
use super::*;
use crate::corpus::{stratified_kfold_labels, synthetic, Label, Registry};
use crate::features::{FeatureConfig, IdfVariant};
use crate::models::{Family, HyperGrid, KnnConfig, LogisticRegressionConfig, ModelConfig, NaiveBayesConfig};
use crate::preprocess::{Preprocessor, StopList, TokenizedDoc};
use crate::rng::stream;

const P: Label = Label::Positive;
const N: Label = Label::Negative;

fn labels(bits: &[u8]) -> Vec<Label> {
    bits.iter().map(|&b| Label::from_target(b == 1)).collect()
}

fn random_labels(rng: &mut impl Rng, n: usize) -> Vec<Label> {
    (0..n).map(|_| Label::from_target(rng.gen_bool(0.5))).collect()
}

/// Tie-adjusted pair counting over all (label-1, label-0) pairs.
fn mann_whitney(scores: &[f64], truth: &[Label]) -> f64 {
    let mut credit = 0.0;
    let mut pairs = 0.0;
    for (i, ti) in truth.iter().enumerate() {
        for (j, tj) in truth.iter().enumerate() {
            if ti.is_target() && !tj.is_target() {
                pairs += 1.0;
                if scores[i] > scores[j] {
                    credit += 1.0;
                } else if scores[i] == scores[j] {
                    credit += 0.5;
                }
            }
        }
    }
    credit / pairs
}

fn separable_corpus(n: usize, seed: u64) -> LabeledCorpus {
    let reg = Registry::builtin();
    let ds = synthetic::separable(reg.get("harvey_2017").unwrap(), n, seed);
    let pre = Preprocessor::new(StopList::default(), true);
    LabeledCorpus::new(pre.process_all(&ds.tweets), ds.labels().unwrap()).unwrap()
}

fn smooth() -> FeatureConfig {
    FeatureConfig {
        idf: IdfVariant::Smooth,
        ..Default::default()
    }
}

#[test]
fn confusion_examples() {
    let cm = confusion(&labels(&[1, 1, 0]), &labels(&[1, 1, 0])).unwrap();
    assert_eq!((cm.tp, cm.tn, cm.fp, cm.fn_), (2, 1, 0, 0));
    let cm = confusion(&labels(&[1, 0]), &labels(&[0, 1])).unwrap();
    assert_eq!((cm.tp, cm.tn, cm.fp, cm.fn_), (0, 0, 1, 1));
    assert!(confusion(&labels(&[1]), &labels(&[1, 0])).is_err());
    assert!(confusion(&[], &[]).is_err());
}

#[test]
fn confusion_matches_tally_on_random_pairs() {
    let mut rng = stream(1, "cm");
    let p = random_labels(&mut rng, 30);
    let t = random_labels(&mut rng, 30);
    let cm = confusion(&p, &t).unwrap();
    let count = |a: bool, b: bool| p.iter().zip(&t).filter(|(x, y)| x.is_target() == a && y.is_target() == b).count();
    assert_eq!(cm.tp, count(true, true));
    assert_eq!(cm.tn, count(false, false));
    assert_eq!(cm.fp, count(true, false));
    assert_eq!(cm.fn_, count(false, true));
}

#[test]
fn metrics_hand_arithmetic() {
    let cm = ConfusionMatrix { tp: 2, tn: 3, fp: 1, fn_: 4 };
    let m = metrics(&cm).unwrap();
    assert_eq!(m.accuracy, 0.5);
    assert_relative_eq!(m.target().precision.unwrap(), 2.0 / 3.0);
    assert_relative_eq!(m.target().recall.unwrap(), 1.0 / 3.0);
    assert_relative_eq!(m.target().f1.unwrap(), 4.0 / 9.0);
    // Label 0: tn / (tn + fn) and tn / (tn + fp).
    assert_relative_eq!(m.class(P).precision.unwrap(), 3.0 / 7.0);
    assert_relative_eq!(m.class(P).recall.unwrap(), 3.0 / 4.0);
}

#[test]
fn metrics_perfect_and_degenerate() {
    let m = metrics(&ConfusionMatrix { tp: 3, tn: 2, fp: 0, fn_: 0 }).unwrap();
    assert_eq!(m.accuracy, 1.0);
    assert_eq!(m.classes[0].f1, Some(1.0));
    assert_eq!(m.classes[1].f1, Some(1.0));
    let m = metrics(&ConfusionMatrix { tp: 0, tn: 4, fp: 0, fn_: 2 }).unwrap();
    assert_eq!(m.target().precision, None);
    assert_eq!(m.target().recall, Some(0.0));
    assert_eq!(m.target().f1, None);
    assert!(metrics(&ConfusionMatrix::default()).is_err());
}

#[test]
fn roc_examples() {
    let truth = labels(&[0, 0, 1, 1]);
    let perfect = roc_curve(&[0.1, 0.2, 0.8, 0.9], &truth).unwrap();
    assert_eq!(perfect.auc, 1.0);
    let flat = roc_curve(&[0.5; 4], &truth).unwrap();
    assert_eq!(flat.auc, 0.5);
    assert_eq!(flat.points, vec![(0.0, 0.0), (1.0, 1.0)]);
    assert!(matches!(roc_curve(&[0.1, 0.2], &labels(&[1, 1])), Err(crate::Error::UndefinedAuc)));
}

#[test]
fn roc_auc_matches_pair_counting_on_twelve_points() {
    let mut rng = stream(2, "roc12");
    for _ in 0..50 {
        let mut truth = random_labels(&mut rng, 12);
        truth[0] = P;
        truth[1] = N;
        let scores: Vec<f64> = (0..12).map(|_| rng.gen_range(0..5) as f64 / 4.0).collect();
        let roc = roc_curve(&scores, &truth).unwrap();
        assert!((roc.auc - mann_whitney(&scores, &truth)).abs() <= 1e-9);
    }
}

#[test]
fn cross_validation_with_uninformative_documents_is_chance() {
    // Identical documents: every family predicts one label for all of them.
    let docs: Vec<TokenizedDoc> = (0..20).map(|i| TokenizedDoc::from_strs(i.to_string(), &["same", "words"])).collect();
    let labels: Vec<Label> = (0..20).map(|i| Label::from_target(i % 2 == 1)).collect();
    let corpus = LabeledCorpus::new(docs, labels).unwrap();
    let cfg = PipelineConfig {
        features: smooth(),
        model: ModelConfig::Nb(NaiveBayesConfig::default()),
    };
    let cv = cross_validate(&corpus, &cfg, 5, 0).unwrap();
    assert_eq!(cv.folds.len(), 5);
    assert!((cv.mean_accuracy - 0.5).abs() <= 0.25);
}

#[test]
fn leave_one_out_gives_single_sample_folds() {
    let corpus = separable_corpus(10, 1);
    let cfg = PipelineConfig {
        features: smooth(),
        model: ModelConfig::Knn(KnnConfig { k: 1 }),
    };
    let cv = cross_validate(&corpus, &cfg, 10, 3).unwrap();
    assert_eq!(cv.folds.len(), 10);
    assert!(cv.folds.iter().all(|f| f.n_test == 1 && f.n_train == 9));
}

#[test]
fn naive_bayes_cross_validates_separable_corpus() {
    let corpus = separable_corpus(100, 2);
    let cfg = PipelineConfig {
        features: smooth(),
        model: ModelConfig::Nb(NaiveBayesConfig::default()),
    };
    let cv = cross_validate(&corpus, &cfg, 5, 4).unwrap();
    assert!(cv.mean_accuracy >= 0.99);
}

#[test]
fn fold_test_sets_partition_the_corpus() {
    let corpus = separable_corpus(37, 5);
    let folds = stratified_kfold_labels(&corpus.labels, 5, 9).unwrap();
    let cfg = PipelineConfig {
        features: smooth(),
        model: ModelConfig::Nb(NaiveBayesConfig::default()),
    };
    let cv = cross_validate_folds(&corpus, &cfg, &folds, 9, &AtomicUsize::new(0)).unwrap();
    let mut seen = vec![0; corpus.len()];
    for f in 0..5 {
        for i in folds.test_indices(f) {
            seen[i] += 1;
        }
        assert_eq!(cv.folds[f].n_test, folds.test_indices(f).len());
        assert_eq!(cv.folds[f].confusion.total(), cv.folds[f].n_test);
    }
    assert!(seen.iter().all(|&s| s == 1));
}

#[test]
fn grid_search_singleton_and_dominance() {
    let corpus = separable_corpus(60, 6);
    let single = HyperGrid::parse("[lr]\nc = [1.0]\n").unwrap();
    let r = grid_search(&corpus, Family::Lr, &single, &FeatureConfig::default(), 5, 1, SelectionMetric::Accuracy).unwrap();
    assert_eq!(r.cells.len(), 1);
    assert_eq!(r.best, 0);
    assert_eq!(r.best_cell().pipeline.model, ModelConfig::Lr(LogisticRegressionConfig { c: 1.0, ..Default::default() }));

    // An absurdly small c flattens the weights, so on imbalanced data the
    // intercept predicts the majority everywhere and the other cell wins.
    let keep: Vec<usize> = (0..corpus.len()).filter(|&i| corpus.labels[i] == N || i % 4 == 0).collect();
    let imbalanced = corpus.subset(&keep);
    let grid = HyperGrid::parse("[lr]\nc = [1e-9, 10.0]\n").unwrap();
    let r = grid_search(&imbalanced, Family::Lr, &grid, &FeatureConfig::default(), 5, 1, SelectionMetric::Accuracy).unwrap();
    assert_eq!(r.best, 1);
    assert!(r.cells[1].cv.mean_accuracy > r.cells[0].cv.mean_accuracy);
}

#[test]
fn grid_search_counts_fit_calls() {
    let corpus = separable_corpus(40, 7);
    let grid = HyperGrid::parse("[lr]\nc = [0.1, 1.0]\nngram = [[1, 1], [1, 2]]\n").unwrap();
    let r = grid_search(&corpus, Family::Lr, &grid, &FeatureConfig::default(), 4, 2, SelectionMetric::Accuracy).unwrap();
    assert_eq!(r.cells.len(), 4);
    assert_eq!(r.fit_calls, 4 * 4);
}

#[test]
fn grid_search_ties_go_to_the_earliest_cell() {
    let corpus = separable_corpus(40, 8);
    let grid = HyperGrid::parse("[knn]\nk = [1, 3, 5]\n").unwrap();
    let r = grid_search(&corpus, Family::Knn, &grid, &smooth(), 5, 2, SelectionMetric::Accuracy).unwrap();
    assert!(r.cells.iter().all(|c| c.cv.mean_accuracy == 1.0));
    assert_eq!(r.best, 0);
}

#[test]
fn grid_search_is_independent_of_thread_count() {
    let corpus = separable_corpus(50, 9);
    let grid = HyperGrid::builtin();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            [Family::Lr, Family::Rf, Family::Mlp]
                .iter()
                .map(|&f| grid_search(&corpus, f, &grid, &FeatureConfig::default(), 5, 11, SelectionMetric::Accuracy).unwrap())
                .collect::<Vec<_>>()
        })
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn benchmark_shares_split_and_orders_records() {
    let corpus = separable_corpus(80, 10);
    let pipelines = vec![
        PipelineConfig {
            features: FeatureConfig::default(),
            model: ModelConfig::Knn(KnnConfig { k: 3 }),
        },
        PipelineConfig {
            features: smooth(),
            model: ModelConfig::Nb(NaiveBayesConfig::default()),
        },
    ];
    let protocol = BenchmarkProtocol {
        repetitions: 1,
        ..Default::default()
    };
    let records = benchmark(&corpus, "harvey_2017", &pipelines, &protocol, 5).unwrap();
    assert_eq!(records[0].family, Family::Nb);
    assert_eq!(records[1].family, Family::Knn);
    assert_eq!(records[0].n_test, records[1].n_test);
    assert_eq!(records[0].n_train, 24);
    let split_a = benchmark_split(&corpus, &protocol, 5).unwrap();
    let split_b = benchmark_split(&corpus, &protocol, 5).unwrap();
    assert_eq!(split_a, split_b);
    for r in &records {
        assert!(r.fit_seconds >= 0.0 && r.predict_seconds >= 0.0);
        assert!(r.accuracy > r.majority_baseline);
    }
}

#[test]
fn majority_baseline_ties_to_label_zero() {
    assert_eq!(majority_baseline_accuracy(&labels(&[0, 1]), &labels(&[0, 0, 1])), 2.0 / 3.0);
    assert_eq!(majority_baseline_accuracy(&labels(&[1, 1, 0]), &labels(&[0, 0, 1])), 1.0 / 3.0);
}

#[test]
fn reports_render_undefined_cells_as_dash() {
    let corpus = separable_corpus(40, 12);
    let pipelines = vec![PipelineConfig {
        features: smooth(),
        model: ModelConfig::Nb(NaiveBayesConfig::default()),
    }];
    let mut records = benchmark(&corpus, "d1", &pipelines, &BenchmarkProtocol { repetitions: 1, ..Default::default() }, 1).unwrap();
    let mut second = records[0].clone();
    second.disaster_id = "d2".into();
    second.auc = None;
    records.push(second);
    let text = report::metric_matrix_csv(&records, &["d1".into(), "d2".into()], |r| r.auc).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "disaster,NB");
    assert_eq!(lines[2], format!("d2,{}", report::UNDEFINED));
    assert_eq!(lines[3], format!("average,{}", report::fmt_value(records[0].auc.unwrap())));
    assert_eq!(lines[4], "skipped,1");
    let csv = report::benchmark_csv(&records).unwrap();
    assert!(csv.lines().next().unwrap().starts_with("disaster,family,params"));
    let roc = records[0].roc.as_ref().unwrap();
    let svg = report::roc_svg("ROC", &[("NB".into(), roc)]);
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));
    let points = report::roc_csv(&[("NB".into(), roc)]).unwrap();
    assert_eq!(points.lines().count(), roc.points.len() + 1);
}

proptest! {
    #[test]
    fn auc_matches_pair_counting(seed in any::<u64>(), n in 2usize..200, levels in 1u32..50) {
        let mut rng = stream(seed, "roc-prop");
        let mut truth = random_labels(&mut rng, n);
        truth[0] = P;
        truth[1] = N;
        let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(0..levels) as f64 * 0.37 - 3.0).collect();
        let roc = roc_curve(&scores, &truth).unwrap();
        prop_assert!((roc.auc - mann_whitney(&scores, &truth)).abs() <= 1e-9);
        prop_assert!((roc.auc - trapezoid_area(&roc.points)).abs() <= 1e-12);
        prop_assert_eq!(roc.points[0], (0.0, 0.0));
        prop_assert_eq!(*roc.points.last().unwrap(), (1.0, 1.0));
        for w in roc.points.windows(2) {
            prop_assert!(w[1].0 >= w[0].0 && w[1].1 >= w[0].1);
        }
        // Strictly increasing transforms leave the curve unchanged.
        let transformed: Vec<f64> = scores.iter().map(|s| (s * 2.0).exp() + 7.0).collect();
        let roc2 = roc_curve(&transformed, &truth).unwrap();
        prop_assert_eq!(&roc.points, &roc2.points);
        prop_assert_eq!(roc.auc, roc2.auc);
    }

    #[test]
    fn metrics_match_definitions(seed in any::<u64>(), n in 1usize..60) {
        let mut rng = stream(seed, "metrics-prop");
        let p = random_labels(&mut rng, n);
        let t = random_labels(&mut rng, n);
        let m = metrics(&confusion(&p, &t).unwrap()).unwrap();
        let hits = p.iter().zip(&t).filter(|(a, b)| a == b).count();
        prop_assert_eq!(m.accuracy, hits as f64 / n as f64);
        for label in Label::BOTH {
            let predicted = p.iter().filter(|&&x| x == label).count();
            let actual = t.iter().filter(|&&x| x == label).count();
            let both = p.iter().zip(&t).filter(|(a, b)| **a == label && **b == label).count();
            let c = m.class(label);
            prop_assert_eq!(c.precision, (predicted > 0).then(|| both as f64 / predicted as f64));
            prop_assert_eq!(c.recall, (actual > 0).then(|| both as f64 / actual as f64));
            if let (Some(pr), Some(rc), Some(f1)) = (c.precision, c.recall, c.f1) {
                prop_assert!((f1 - 2.0 * pr * rc / (pr + rc)).abs() < 1e-12);
            }
        }
    }
}
