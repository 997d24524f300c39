#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use disaster_sentiment::corpus::synthetic::{disaster_like, SyntheticParams};
use disaster_sentiment::corpus::{write_canonical_file, Registry};

/// Writes one synthetic CSV per registered disaster into `dir`.
pub fn write_synthetic_corpus(dir: &Path, n_docs: usize, seed: u64) {
    let registry = Registry::builtin();
    for spec in &registry.disasters {
        let params = SyntheticParams {
            n_docs,
            ..Default::default()
        };
        let ds = disaster_like(spec, &params, seed);
        write_canonical_file(&dir.join(format!("{}.csv", spec.disaster_id)), &ds).unwrap();
    }
}

pub fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_disaster-sentiment"))
        .args(args)
        .env_remove("DISASTER_SENTIMENT_SEED")
        .env_remove("DISASTER_SENTIMENT_CONFIG")
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Relative path → bytes for every file under `root`.
pub fn snapshot(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

/// Files whose content is wall-clock timing.
pub fn is_timing_file(path: &Path) -> bool {
    path.file_stem().is_some_and(|s| s == "timing")
}
