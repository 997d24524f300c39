use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::ngram::{extract_ngrams, NgramRange};
use crate::error::{Error, Result};
use crate::preprocess::TokenizedDoc;

/// Term index with document frequencies.
///
/// Indices follow lexicographic term order, so two vocabularies built from
/// the same documents are identical.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    doc_freq: Vec<usize>,
    n_docs: usize,
    ngram_range: NgramRange,
}

/// Terms with document frequency at least `min_df`.
pub fn build_vocabulary(docs: &[TokenizedDoc], range: NgramRange, min_df: usize) -> Result<Vocabulary> {
    if docs.is_empty() {
        return Err(Error::InvalidParameter("cannot build a vocabulary from zero documents".into()));
    }
    if min_df < 1 {
        return Err(Error::InvalidParameter("min_df must be at least 1".into()));
    }
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for doc in docs {
        let unique: HashSet<String> = extract_ngrams(&doc.tokens, range).into_iter().collect();
        for term in unique {
            *df.entry(term).or_default() += 1;
        }
    }
    let kept: Vec<(String, usize)> = df.into_iter().filter(|&(_, c)| c >= min_df).collect();
    if kept.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    Vocabulary::from_parts(
        kept.iter().map(|(t, _)| t.clone()).collect(),
        kept.iter().map(|&(_, c)| c).collect(),
        docs.len(),
        range,
    )
}

impl Vocabulary {
    fn from_parts(terms: Vec<String>, doc_freq: Vec<usize>, n_docs: usize, ngram_range: NgramRange) -> Result<Self> {
        if terms.len() != doc_freq.len() {
            return Err(Error::LengthMismatch {
                left: terms.len(),
                right: doc_freq.len(),
            });
        }
        let mut index = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate vocabulary term {t:?}")));
            }
            if doc_freq[i] < 1 || doc_freq[i] > n_docs {
                return Err(Error::InvalidParameter(format!(
                    "document frequency {} of {t:?} outside 1..={n_docs}",
                    doc_freq[i]
                )));
            }
        }
        Ok(Vocabulary {
            terms,
            index,
            doc_freq,
            n_docs,
            ngram_range,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn ngram_range(&self) -> NgramRange {
        self.ngram_range
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_freq(&self, index: usize) -> usize {
        self.doc_freq[index]
    }

    pub fn doc_freq_of(&self, term: &str) -> Option<usize> {
        self.index_of(term).map(|i| self.doc_freq[i])
    }

    /// TSV export: a `#n_docs=N<TAB>ngram_range=LO,HI` line, then
    /// `term<TAB>index<TAB>doc_freq` rows in index order.
    pub fn write_tsv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "#n_docs={}\tngram_range={}", self.n_docs, self.ngram_range)?;
        for (i, t) in self.terms.iter().enumerate() {
            writeln!(w, "{t}\t{i}\t{}", self.doc_freq[i])?;
        }
        Ok(())
    }

    pub fn to_tsv(&self) -> String {
        let mut buf = Vec::new();
        self.write_tsv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("terms are utf-8")
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let bad = |detail: String| Error::Config(format!("vocabulary tsv: {detail}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty".into()))?;
        let mut n_docs = None;
        let mut range = None;
        for field in header.trim_start_matches('#').split('\t') {
            match field.split_once('=') {
                Some(("n_docs", v)) => n_docs = v.parse::<usize>().ok(),
                Some(("ngram_range", v)) => {
                    range = v
                        .split_once(',')
                        .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                        .map(|(a, b)| NgramRange::new(a, b))
                        .transpose()?;
                }
                _ => return Err(bad(format!("unexpected header field {field:?}"))),
            }
        }
        let n_docs = n_docs.ok_or_else(|| bad("missing n_docs".into()))?;
        let range = range.ok_or_else(|| bad("missing ngram_range".into()))?;
        let mut terms = Vec::new();
        let mut doc_freq = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let parts: Vec<&str> = line.split('\t').collect();
            let [term, idx, df] = parts.as_slice() else {
                return Err(bad(format!("line {}: expected 3 fields", lineno + 2)));
            };
            let idx: usize = idx.parse().map_err(|_| bad(format!("line {}: bad index", lineno + 2)))?;
            if idx != terms.len() {
                return Err(bad(format!("line {}: indices must be dense and sorted", lineno + 2)));
            }
            terms.push(term.to_string());
            doc_freq.push(df.parse().map_err(|_| bad(format!("line {}: bad doc_freq", lineno + 2)))?);
        }
        Vocabulary::from_parts(terms, doc_freq, n_docs, range)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        Self::from_tsv(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    /// SHA-256 of the TSV export, hex encoded.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_tsv().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(v: &[&[&str]]) -> Vec<TokenizedDoc> {
        v.iter()
            .enumerate()
            .map(|(i, t)| TokenizedDoc::from_strs(i.to_string(), t))
            .collect()
    }

    #[test]
    fn counts_by_hand() {
        let d = docs(&[&["a", "b"], &["b", "c"]]);
        let v = build_vocabulary(&d, NgramRange::UNIGRAMS, 1).unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v.doc_freq_of("a"), Some(1));
        assert_eq!(v.doc_freq_of("b"), Some(2));
        assert_eq!(v.doc_freq_of("c"), Some(1));
        assert_eq!(v.n_docs(), 2);
        assert_eq!(v.terms(), ["a", "b", "c"]);

        let v2 = build_vocabulary(&d, NgramRange::UNIGRAMS, 2).unwrap();
        assert_eq!(v2.terms(), ["b"]);
        assert!(matches!(
            build_vocabulary(&d, NgramRange::UNIGRAMS, 3),
            Err(Error::EmptyVocabulary)
        ));
    }

    #[test]
    fn doc_frequency_is_per_document() {
        let v = build_vocabulary(&docs(&[&["x", "x", "x"]]), NgramRange::UNIGRAMS, 1).unwrap();
        assert_eq!(v.doc_freq_of("x"), Some(1));
    }

    #[test]
    fn tsv_round_trip_and_fingerprint() {
        let d = docs(&[&["a", "b", "a"], &["b", "c"], &["c", "d"]]);
        let v = build_vocabulary(&d, NgramRange::new(1, 2).unwrap(), 1).unwrap();
        let tsv = v.to_tsv();
        assert!(tsv.starts_with("#n_docs=3\tngram_range=1,2\n"));
        let back = Vocabulary::from_tsv(&tsv).unwrap();
        assert_eq!(back, v);
        assert_eq!(back.fingerprint(), v.fingerprint());
        let other = build_vocabulary(&d[..2], NgramRange::UNIGRAMS, 1).unwrap();
        assert_ne!(other.fingerprint(), v.fingerprint());
        assert!(Vocabulary::from_tsv("#n_docs=3\tngram_range=1,1\na\t1\t1\n").is_err());
    }
}
