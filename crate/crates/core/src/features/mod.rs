//! Vocabulary construction and tf-idf sparse vectors.
//!
//! The weight of term `t` in document `d` is `tf(t, d) * idf(t)` with
//! `tf` the raw count and `idf(t) = ln(n_d / (1 + df(t)))`. The idf is used
//! exactly as written: a term found in every document gets a negative weight.
//! [`IdfVariant::Smooth`], sublinear tf and L2 normalization are opt-in.

mod ngram;
mod sparse;
mod tfidf;
mod vocab;

pub use ngram::{extract_ngrams, NgramRange};
pub use sparse::SparseVector;
pub use tfidf::{
    idf_value, inverse_document_frequency, term_frequency, vectorize, FeatureConfig, IdfVariant, Normalization,
    TfVariant, Vectorizer,
};
pub use vocab::{build_vocabulary, Vocabulary};
