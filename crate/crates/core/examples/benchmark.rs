//! Times every family on one shared split and writes the accuracy table,
//! timing table and ROC curves to a directory.
//!
//! cargo run --release --example benchmark -- [OUT_DIR]

use std::path::PathBuf;

use disaster_sentiment::corpus::synthetic::{disaster_like, SyntheticParams};
use disaster_sentiment::corpus::Registry;
use disaster_sentiment::evaluate::report::{self, write_text};
use disaster_sentiment::evaluate::{benchmark, BenchmarkProtocol, LabeledCorpus, PipelineConfig};
use disaster_sentiment::features::{FeatureConfig, IdfVariant};
use disaster_sentiment::models::{Family, ModelConfig};
use disaster_sentiment::preprocess::{Preprocessor, StopList};

fn main() -> disaster_sentiment::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "benchmark-out".into()));
    let registry = Registry::builtin();
    let ds = disaster_like(registry.get("michael_2018")?, &SyntheticParams { n_docs: 1500, ..Default::default() }, 9);
    let pre = Preprocessor::new(StopList::default(), true);
    let corpus = LabeledCorpus::new(pre.process_all(&ds.tweets), ds.labels()?)?;

    let pipelines: Vec<PipelineConfig> = Family::ALL
        .iter()
        .map(|&f| PipelineConfig {
            features: FeatureConfig {
                idf: if f == Family::Nb { IdfVariant::Smooth } else { IdfVariant::Verbatim },
                ..Default::default()
            },
            model: ModelConfig::default_for(f),
        })
        .collect();
    let records = benchmark(&corpus, "michael_2018", &pipelines, &BenchmarkProtocol::default(), 1)?;
    for r in &records {
        println!(
            "{:>8}  accuracy {:.3}  AUC {}  fit {:.4}s  predict {:.4}s",
            r.family.label(),
            r.accuracy,
            report::fmt_opt(r.auc),
            r.fit_seconds,
            r.predict_seconds
        );
    }
    write_text(&out.join("benchmark.csv"), &report::benchmark_csv(&records)?)?;
    write_text(&out.join("timing.csv"), &report::timing_csv(&records)?)?;
    let curves: Vec<_> = records
        .iter()
        .filter_map(|r| r.roc.as_ref().map(|c| (r.family.label().to_string(), c)))
        .collect();
    write_text(&out.join("roc.svg"), &report::roc_svg("ROC curves", &curves))?;
    println!("wrote {}", out.display());
    Ok(())
}
