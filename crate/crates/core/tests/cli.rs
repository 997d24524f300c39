mod common;

use std::path::Path;

use common::{cli, snapshot, stderr, stdout, write_synthetic_corpus};

fn corpus(n_docs: usize) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    write_synthetic_corpus(dir.path(), n_docs, 3);
    dir
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ingest_writes_canonical_files_and_totals() {
    let data = corpus(40);
    let out = tempfile::tempdir().unwrap();
    let o = cli(&["ingest", "--seed", "1", "--data", s(data.path()), "--out", s(out.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("total: 360 tweets"));
    let ingest = out.path().join("ingest");
    assert_eq!(std::fs::read_dir(&ingest).unwrap().count(), 10);
    let report = std::fs::read_to_string(ingest.join("ingest_report.csv")).unwrap();
    assert_eq!(report.lines().count(), 10);

    let first = snapshot(out.path());
    let o = cli(&["ingest", "--seed", "1", "--data", s(data.path()), "--out", s(out.path())]);
    assert!(o.status.success());
    assert_eq!(first, snapshot(out.path()));
}

#[test]
fn missing_corpus_file_names_the_path() {
    let data = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    write_synthetic_corpus(data.path(), 10, 1);
    std::fs::remove_file(data.path().join("floods_2013.csv")).unwrap();
    let o = cli(&["ingest", "--seed", "1", "--data", s(data.path()), "--out", s(out.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("flood"), "{}", stderr(&o));
}

#[test]
fn usage_and_config_errors_exit_with_one() {
    let o = cli(&["train", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(1));
    let data = corpus(20);
    let o = cli(&["train", "--data", s(data.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("seed"));
    let o = cli(&["train", "--seed", "1", "--data", s(data.path()), "--family", "perceptron"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn train_writes_model_and_metrics_deterministically() {
    let data = corpus(60);
    let out = tempfile::tempdir().unwrap();
    let args = ["train", "--seed", "4", "--data", s(data.path()), "--out", s(out.path()), "--disaster", "sandy_2012", "--family", "nb"];
    let o = cli(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let dir = out.path().join("train");
    assert!(dir.join("sandy_2012_nb.json").exists());
    let metrics = std::fs::read_to_string(dir.join("sandy_2012_nb_metrics.csv")).unwrap();
    assert!(metrics.starts_with("split,n,tp,tn,fp,fn,accuracy"));
    let first = snapshot(out.path());
    assert!(cli(&args).status.success());
    assert_eq!(first, snapshot(out.path()));
}

#[test]
fn naive_bayes_with_negative_idf_is_rejected() {
    let data = corpus(60);
    let cfg_dir = tempfile::tempdir().unwrap();
    let cfg = cfg_dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 3\n[models.nb]\nidf = \"verbatim\"\n").unwrap();
    let o = cli(&[
        "train",
        "--config",
        s(&cfg),
        "--data",
        s(data.path()),
        "--out",
        s(cfg_dir.path()),
        "--disaster",
        "harvey_2017",
        "--family",
        "nb",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("non-negative features"), "{}", stderr(&o));
}

#[test]
fn gridsearch_tables_have_one_row_per_cell_and_fold() {
    let data = corpus(60);
    let out = tempfile::tempdir().unwrap();
    let o = cli(&[
        "gridsearch",
        "--seed",
        "2",
        "--data",
        s(data.path()),
        "--out",
        s(out.path()),
        "--disaster",
        "matthew_2016",
        "--family",
        "lr",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let dir = out.path().join("gridsearch");
    let grid = std::fs::read_to_string(dir.join("matthew_2016_lr_grid.csv")).unwrap();
    let folds = std::fs::read_to_string(dir.join("matthew_2016_lr_folds.csv")).unwrap();
    // Built-in LR grid: 4 values of c times 2 n-gram ranges, 5 folds.
    assert_eq!(grid.lines().count() - 1, 8);
    assert_eq!(folds.lines().count() - 1, 8 * 5);
    assert_eq!(grid.lines().filter(|l| l.ends_with(",true")).count(), 1);
    assert!(dir.join("matthew_2016_lr_best.json").exists());
}

#[test]
fn singleton_grid_file_gives_one_row() {
    let data = corpus(40);
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("grid.toml"), "[knn]\nk = [3]\n").unwrap();
    std::fs::write(dir.path().join("run.toml"), "seed = 8\nout_dir = \"out\"\n[grids]\npath = \"grid.toml\"\n").unwrap();
    let o = cli(&[
        "gridsearch",
        "--config",
        s(&dir.path().join("run.toml")),
        "--data",
        s(data.path()),
        "--disaster",
        "tornado_2011",
        "--family",
        "knn",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let grid = std::fs::read_to_string(dir.path().join("out/gridsearch/tornado_2011_knn_grid.csv")).unwrap();
    assert_eq!(grid.lines().count(), 2);
}

#[test]
fn benchmark_reports_every_family_per_corpus() {
    let data = corpus(60);
    let out = tempfile::tempdir().unwrap();
    let o = cli(&["benchmark", "--seed", "5", "--data", s(data.path()), "--out", s(out.path()), "--plots"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let dir = out.path().join("benchmark");
    let bench = std::fs::read_to_string(dir.join("benchmark.csv")).unwrap();
    let timing = std::fs::read_to_string(dir.join("timing.csv")).unwrap();
    assert_eq!(bench.lines().count() - 1, 9 * 8);
    assert_eq!(timing.lines().count() - 1, 9 * 8);
    for id in disaster_sentiment::corpus::Registry::builtin().ids() {
        let rows = bench.lines().filter(|l| l.starts_with(&format!("{id},"))).count();
        assert_eq!(rows, 8, "{id}");
    }
    let mut rdr = csv::Reader::from_reader(timing.as_bytes());
    let header = rdr.headers().unwrap().clone();
    let total = header.iter().position(|h| h == "total_seconds").unwrap();
    let acc = header.iter().position(|h| h == "accuracy").unwrap();
    for r in rdr.records() {
        let r = r.unwrap();
        assert!(r[total].parse::<f64>().unwrap() >= 0.0);
        assert!((0.0..=1.0).contains(&r[acc].parse::<f64>().unwrap()));
    }
    for f in ["accuracy.csv", "auc.csv", "f1.csv", "roc/dorian_2019.csv", "roc/dorian_2019.svg", "timing.svg"] {
        assert!(dir.join(f).exists(), "{f}");
    }
}

#[test]
fn report_writes_figure_inventory() {
    let data = corpus(50);
    let out = tempfile::tempdir().unwrap();
    let o = cli(&["report", "--seed", "1", "--data", s(data.path()), "--out", s(out.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let dir = out.path().join("report");
    let reg = disaster_sentiment::corpus::Registry::builtin();
    let mut expected = vec!["fig2.csv".to_string(), "fig3.csv".into(), "fig6.csv".into(), "fig7.csv".into()];
    for (group, figs) in [("types", [4, 5]), ("hurricanes", [8, 9])] {
        for id in reg.group(group).unwrap() {
            for f in figs {
                expected.push(format!("fig{f}_{id}.csv"));
            }
        }
    }
    for f in &expected {
        assert!(dir.join(f).exists(), "{f}");
    }
    let fig2 = std::fs::read_to_string(dir.join("fig2.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(fig2.as_bytes());
    let sum: f64 = rdr.records().map(|r| r.unwrap()[3].parse::<f64>().unwrap()).sum();
    assert!((sum - 1.0).abs() <= 1e-9);

    let single = tempfile::tempdir().unwrap();
    let o = cli(&["report", "--seed", "1", "--data", s(data.path()), "--out", s(single.path()), "--disaster", "wildfires_2018"]);
    assert!(o.status.success());
    let mut names: Vec<String> = std::fs::read_dir(single.path().join("report"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names, ["analytics_summary.json", "fig4_wildfires_2018.csv", "fig5_wildfires_2018.csv"]);
}

#[test]
fn environment_variables_mirror_flags() {
    let data = corpus(40);
    let out = tempfile::tempdir().unwrap();
    let o = std::process::Command::new(env!("CARGO_BIN_EXE_disaster-sentiment"))
        .arg("train")
        .env("DISASTER_SENTIMENT_SEED", "6")
        .env("DISASTER_SENTIMENT_DATA", data.path())
        .env("DISASTER_SENTIMENT_OUT", out.path())
        .env("DISASTER_SENTIMENT_DISASTER", "blizzard_2016")
        .env("DISASTER_SENTIMENT_FAMILY", "svm")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.path().join("train/blizzard_2016_svm.json").exists());
}
