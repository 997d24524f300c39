use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::ngram::{extract_ngrams, NgramRange};
use super::sparse::SparseVector;
use super::vocab::{build_vocabulary, Vocabulary};
use crate::error::{Error, Result};
use crate::preprocess::TokenizedDoc;

/// Inverse document frequency formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdfVariant {
    /// `ln(n_d / (1 + df))`. Negative for terms present in every document.
    #[default]
    Verbatim,
    /// `ln((1 + n_d) / (1 + df)) + 1`, always positive.
    Smooth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TfVariant {
    /// Raw occurrence count.
    #[default]
    Raw,
    /// `1 + ln(count)`.
    Sublinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    #[default]
    None,
    L2,
}

/// Featurization settings. Defaults: unigrams, `min_df = 1`, verbatim idf,
/// raw tf, no normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureConfig {
    pub ngram: NgramRange,
    pub min_df: usize,
    pub idf: IdfVariant,
    pub tf: TfVariant,
    pub norm: Normalization,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            ngram: NgramRange::UNIGRAMS,
            min_df: 1,
            idf: IdfVariant::Verbatim,
            tf: TfVariant::Raw,
            norm: Normalization::None,
        }
    }
}

/// Raw count of `term` (an n-gram, words separated by single spaces) in the
/// document.
pub fn term_frequency(doc: &TokenizedDoc, term: &str) -> usize {
    let words: Vec<&str> = term.split(' ').collect();
    if words.is_empty() || doc.tokens.len() < words.len() {
        return 0;
    }
    doc.tokens
        .windows(words.len())
        .filter(|w| w.iter().zip(&words).all(|(a, b)| a == b))
        .count()
}

pub fn idf_value(n_docs: usize, doc_freq: usize, variant: IdfVariant) -> f64 {
    let n = n_docs as f64;
    let df = doc_freq as f64;
    match variant {
        IdfVariant::Verbatim => (n / (1.0 + df)).ln(),
        IdfVariant::Smooth => ((1.0 + n) / (1.0 + df)).ln() + 1.0,
    }
}

/// `ln(n_d / (1 + df(t)))` for a vocabulary term.
pub fn inverse_document_frequency(vocab: &Vocabulary, term: &str) -> Result<f64> {
    let df = vocab
        .doc_freq_of(term)
        .ok_or_else(|| Error::UnknownTerm(term.to_string()))?;
    Ok(idf_value(vocab.n_docs(), df, IdfVariant::Verbatim))
}

fn term_counts(ngrams: &[String]) -> HashMap<&str, usize> {
    let mut counts = HashMap::new();
    for g in ngrams {
        *counts.entry(g.as_str()).or_insert(0) += 1;
    }
    counts
}

/// `tf(t, d) * idf(t)` for each vocabulary term in the document, with raw
/// counts and verbatim idf. Out-of-vocabulary terms are ignored and zero
/// weights are not stored.
pub fn vectorize(doc: &TokenizedDoc, vocab: &Vocabulary) -> SparseVector {
    let ngrams = extract_ngrams(&doc.tokens, vocab.ngram_range());
    SparseVector::from_pairs(term_counts(&ngrams).into_iter().filter_map(|(term, count)| {
        let idx = vocab.index_of(term)?;
        Some((idx, count as f64 * idf_value(vocab.n_docs(), vocab.doc_freq(idx), IdfVariant::Verbatim)))
    }))
}

/// Vocabulary plus the featurization settings and precomputed idf weights.
#[derive(Debug, Clone)]
pub struct Vectorizer {
    config: FeatureConfig,
    vocab: Vocabulary,
    idf: Vec<f64>,
}

impl Vectorizer {
    pub fn fit(docs: &[TokenizedDoc], config: FeatureConfig) -> Result<Self> {
        let vocab = build_vocabulary(docs, config.ngram, config.min_df)?;
        Ok(Self::from_vocabulary(vocab, config))
    }

    pub fn from_vocabulary(vocab: Vocabulary, mut config: FeatureConfig) -> Self {
        config.ngram = vocab.ngram_range();
        let idf = (0..vocab.len())
            .map(|i| idf_value(vocab.n_docs(), vocab.doc_freq(i), config.idf))
            .collect();
        Vectorizer { config, vocab, idf }
    }

    pub fn config(&self) -> &FeatureConfig {
        &self.config
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn dim(&self) -> usize {
        self.vocab.len()
    }

    pub fn idf(&self, index: usize) -> f64 {
        self.idf[index]
    }

    pub fn transform(&self, doc: &TokenizedDoc) -> SparseVector {
        let ngrams = extract_ngrams(&doc.tokens, self.vocab.ngram_range());
        let v = SparseVector::from_pairs(term_counts(&ngrams).into_iter().filter_map(|(term, count)| {
            let idx = self.vocab.index_of(term)?;
            let tf = match self.config.tf {
                TfVariant::Raw => count as f64,
                TfVariant::Sublinear => 1.0 + (count as f64).ln(),
            };
            Some((idx, tf * self.idf[idx]))
        }));
        match self.config.norm {
            Normalization::None => v,
            Normalization::L2 => {
                let n = v.norm();
                if n > 0.0 {
                    v.scaled(1.0 / n)
                } else {
                    v
                }
            }
        }
    }

    pub fn transform_all(&self, docs: &[TokenizedDoc]) -> Vec<SparseVector> {
        use rayon::prelude::*;
        docs.par_iter().map(|d| self.transform(d)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn doc(t: &[&str]) -> TokenizedDoc {
        TokenizedDoc::from_strs("d", t)
    }

    #[test]
    fn term_frequency_examples() {
        assert_eq!(term_frequency(&doc(&["a", "b", "a"]), "a"), 2);
        assert_eq!(term_frequency(&doc(&["a", "b"]), "z"), 0);
        assert_eq!(term_frequency(&doc(&["a", "b", "a", "b"]), "a b"), 2);
    }

    #[test]
    fn idf_examples() {
        assert_abs_diff_eq!(idf_value(10, 4, IdfVariant::Verbatim), 2f64.ln(), epsilon = 1e-15);
        assert_eq!(idf_value(1, 0, IdfVariant::Verbatim), 0.0);
        assert_abs_diff_eq!(idf_value(3, 3, IdfVariant::Verbatim), -0.287_682_072_451_780_9, epsilon = 1e-15);
        assert!(idf_value(3, 3, IdfVariant::Smooth) > 0.0);
    }

    #[test]
    fn unknown_term_errors() {
        let v = build_vocabulary(&[doc(&["a"])], NgramRange::UNIGRAMS, 1).unwrap();
        assert!(matches!(inverse_document_frequency(&v, "zz"), Err(Error::UnknownTerm(_))));
    }

    #[test]
    fn vectorize_two_doc_corpus() {
        let corpus = [doc(&["a", "b"]), doc(&["b", "c"])];
        let v = build_vocabulary(&corpus, NgramRange::UNIGRAMS, 1).unwrap();
        let x = vectorize(&corpus[0], &v);
        // a: 1 * ln(2/2) = 0, dropped; b: 1 * ln(2/3).
        assert_eq!(x.nnz(), 1);
        assert_eq!(x.entries()[0].0, v.index_of("b").unwrap());
        assert_abs_diff_eq!(x.entries()[0].1, (2.0f64 / 3.0).ln(), epsilon = 1e-15);
        assert!(vectorize(&doc(&[]), &v).is_empty());
        assert!(vectorize(&doc(&["zzz"]), &v).is_empty());
    }

    #[test]
    fn tf_times_idf_with_given_idf() {
        // idf(a) = 0.5 needs n/(1+df) = e^0.5; emulate with a vectorizer whose
        // idf table is overwritten.
        let corpus = [doc(&["a", "b"]), doc(&["c"])];
        let vocab = build_vocabulary(&corpus, NgramRange::UNIGRAMS, 1).unwrap();
        let mut vz = Vectorizer::from_vocabulary(vocab, FeatureConfig::default());
        let (ia, ib) = (vz.vocab.index_of("a").unwrap(), vz.vocab.index_of("b").unwrap());
        vz.idf[ia] = 0.5;
        vz.idf[ib] = 1.0;
        let x = vz.transform(&doc(&["a", "a", "b"]));
        assert_eq!(x.entries(), &[(ia, 1.0), (ib, 1.0)]);
    }

    #[test]
    fn idf_strictly_decreases_with_df() {
        for n in [1usize, 2, 7, 100] {
            for variant in [IdfVariant::Verbatim, IdfVariant::Smooth] {
                for df in 1..n {
                    assert!(idf_value(n, df, variant) > idf_value(n, df + 1, variant));
                }
            }
        }
    }

    #[test]
    fn l2_and_sublinear_flags() {
        let corpus = [doc(&["a", "a", "b"]), doc(&["c"]), doc(&["d"])];
        let cfg = FeatureConfig {
            norm: Normalization::L2,
            tf: TfVariant::Sublinear,
            ..Default::default()
        };
        let vz = Vectorizer::fit(&corpus, cfg).unwrap();
        let x = vz.transform(&corpus[0]);
        assert_abs_diff_eq!(x.norm(), 1.0, epsilon = 1e-12);
        let ratio = x.get(vz.vocab.index_of("a").unwrap()) / x.get(vz.vocab.index_of("b").unwrap());
        assert_abs_diff_eq!(ratio, 1.0 + 2f64.ln(), epsilon = 1e-12);
    }
}
