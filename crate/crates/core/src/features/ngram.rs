use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inclusive n-gram size range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 2]", into = "[usize; 2]")]
pub struct NgramRange {
    lo: usize,
    hi: usize,
}

impl NgramRange {
    pub const UNIGRAMS: NgramRange = NgramRange { lo: 1, hi: 1 };

    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo < 1 || hi < lo {
            return Err(Error::InvalidParameter(format!("invalid n-gram range ({lo}, {hi})")));
        }
        Ok(NgramRange { lo, hi })
    }

    pub fn lo(self) -> usize {
        self.lo
    }

    pub fn hi(self) -> usize {
        self.hi
    }
}

impl Default for NgramRange {
    fn default() -> Self {
        Self::UNIGRAMS
    }
}

impl TryFrom<[usize; 2]> for NgramRange {
    type Error = Error;

    fn try_from(v: [usize; 2]) -> Result<Self> {
        NgramRange::new(v[0], v[1])
    }
}

impl From<NgramRange> for [usize; 2] {
    fn from(r: NgramRange) -> Self {
        [r.lo, r.hi]
    }
}

impl fmt::Display for NgramRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.lo, self.hi)
    }
}

/// All contiguous n-grams for `n` in the range, space-joined; left to right
/// within each `n`, `n` ascending.
pub fn extract_ngrams(tokens: &[String], range: NgramRange) -> Vec<String> {
    let mut out = Vec::new();
    for n in range.lo..=range.hi {
        if tokens.len() < n {
            break;
        }
        out.extend(tokens.windows(n).map(|w| w.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn examples() {
        let abc = toks(&["a", "b", "c"]);
        assert_eq!(extract_ngrams(&abc, NgramRange::new(1, 1).unwrap()), ["a", "b", "c"]);
        assert_eq!(
            extract_ngrams(&abc, NgramRange::new(1, 2).unwrap()),
            ["a", "b", "c", "a b", "b c"]
        );
        assert!(extract_ngrams(&toks(&["a"]), NgramRange::new(2, 2).unwrap()).is_empty());
        assert!(NgramRange::new(0, 1).is_err());
        assert!(NgramRange::new(2, 1).is_err());
    }

    #[test]
    fn count_matches_window_arithmetic() {
        let t = toks(&["w"; 7]);
        let r = NgramRange::new(2, 4).unwrap();
        assert_eq!(extract_ngrams(&t, r).len(), 6 + 5 + 4);
    }
}
