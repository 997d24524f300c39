//! Fits all eight classifier families on a 30% split of a synthetic disaster
//! corpus and prints test metrics, then saves and reloads one model.

use disaster_sentiment::corpus::synthetic::{disaster_like, SyntheticParams};
use disaster_sentiment::corpus::{split_indices, Registry};
use disaster_sentiment::evaluate::{confusion, metrics, roc_curve, FittedPipeline, LabeledCorpus, PipelineConfig};
use disaster_sentiment::features::{FeatureConfig, IdfVariant};
use disaster_sentiment::models::{Family, ModelConfig, SavedModel};
use disaster_sentiment::preprocess::{Preprocessor, StopList};

fn main() -> disaster_sentiment::Result<()> {
    let registry = Registry::builtin();
    let ds = disaster_like(registry.get("harvey_2017")?, &SyntheticParams::default(), 11);
    let pre = Preprocessor::new(StopList::default(), true);
    let corpus = LabeledCorpus::new(pre.process_all(&ds.tweets), ds.labels()?)?;
    let split = split_indices(&corpus.labels, 0.3, 11)?;
    let (train, test) = (corpus.subset(&split.train), corpus.subset(&split.test));
    println!("{} training / {} test tweets", train.len(), test.len());

    for family in Family::ALL {
        let features = FeatureConfig {
            // Naive Bayes needs non-negative weights.
            idf: if family == Family::Nb { IdfVariant::Smooth } else { IdfVariant::Verbatim },
            ..Default::default()
        };
        let config = PipelineConfig {
            features,
            model: ModelConfig::default_for(family),
        };
        let fitted = FittedPipeline::fit(&train, &config, 5)?;
        let scores = fitted.scores(&test.docs)?;
        let pred: Vec<_> = scores.iter().map(|&s| fitted.model.decide(s)).collect();
        let m = metrics(&confusion(&pred, &test.labels)?)?;
        let auc = roc_curve(&scores, &test.labels)?.auc;
        println!(
            "{:>8}  accuracy {:.3}  F1(1) {:.3}  AUC {auc:.3}",
            family.label(),
            m.accuracy,
            m.target().f1.unwrap_or(f64::NAN)
        );
        if family == Family::Lr {
            let saved = SavedModel::new(fitted.model.clone(), fitted.vectorizer.vocabulary(), features);
            let back = SavedModel::from_json(&saved.to_json()?)?;
            let model = back.classifier_for(fitted.vectorizer.vocabulary())?;
            println!("          reloaded LR agrees: {}", model == &fitted.model);
        }
    }
    Ok(())
}
