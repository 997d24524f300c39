//! Vocabulary and tf-idf weights for a handful of documents under both idf
//! variants. Terms present in most documents get negative verbatim weights.

use disaster_sentiment::features::{FeatureConfig, IdfVariant, NgramRange, Vectorizer};
use disaster_sentiment::preprocess::{Preprocessor, StopList, TokenizedDoc};

fn main() -> disaster_sentiment::Result<()> {
    let texts = [
        "flood water rising near the shelter",
        "shelter open with food and water",
        "water bottles delivered to the flood shelter",
        "roads closed by flood water",
    ];
    let pre = Preprocessor::new(StopList::default(), true);
    let docs: Vec<TokenizedDoc> = texts
        .iter()
        .enumerate()
        .map(|(i, t)| TokenizedDoc::new(i.to_string(), pre.process_text(t)))
        .collect();

    for idf in [IdfVariant::Verbatim, IdfVariant::Smooth] {
        let config = FeatureConfig {
            idf,
            ngram: NgramRange::new(1, 2)?,
            ..Default::default()
        };
        let v = Vectorizer::fit(&docs, config)?;
        println!("{idf:?} idf, {} terms:", v.dim());
        let x = v.transform_all(&docs);
        for (doc, row) in docs.iter().zip(&x) {
            let weights: Vec<String> = row
                .iter()
                .map(|(j, w)| format!("{}={w:.3}", v.vocabulary().term(j).unwrap_or("?")))
                .collect();
            println!("  doc {}: {}", doc.source_id, weights.join(" "));
        }
    }
    Ok(())
}
