//! Five-fold stratified grid search over the built-in logistic-regression
//! and k-nearest-neighbour grids.

use disaster_sentiment::corpus::synthetic::{disaster_like, SyntheticParams};
use disaster_sentiment::corpus::Registry;
use disaster_sentiment::evaluate::{grid_search, LabeledCorpus, SelectionMetric};
use disaster_sentiment::features::FeatureConfig;
use disaster_sentiment::models::{Family, HyperGrid};
use disaster_sentiment::preprocess::{Preprocessor, StopList};

fn main() -> disaster_sentiment::Result<()> {
    let registry = Registry::builtin();
    let params = SyntheticParams {
        n_docs: 300,
        label_noise: 0.1,
        ..Default::default()
    };
    let ds = disaster_like(registry.get("tornado_2011")?, &params, 3);
    let pre = Preprocessor::new(StopList::default(), true);
    let corpus = LabeledCorpus::new(pre.process_all(&ds.tweets), ds.labels()?)?;
    let grid = HyperGrid::builtin();

    for family in [Family::Lr, Family::Knn] {
        let r = grid_search(&corpus, family, &grid, &FeatureConfig::default(), 5, 42, SelectionMetric::Accuracy)?;
        println!("{} ({} cells, {} fits):", family.label(), r.cells.len(), r.fit_calls);
        for c in &r.cells {
            let mark = if c.index == r.best { "*" } else { " " };
            println!("  {mark} {:<40} mean accuracy {:.4}", c.params, c.cv.mean_accuracy);
        }
    }
    Ok(())
}
