use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};

const DEFAULT_LIST: &str = include_str!("../../data/stopwords.txt");

/// Words that are always stop-listed, whatever file is loaded.
pub const REQUIRED_STOP_WORDS: [&str; 4] = ["is", "and", "has", "like"];

/// Set of lowercase stop words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopList {
    words: BTreeSet<String>,
}

impl Default for StopList {
    fn default() -> Self {
        Self::parse(DEFAULT_LIST)
    }
}

impl StopList {
    /// Parses one word per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.to_lowercase())
            .collect();
        Self::from_words(words)
    }

    pub fn from_words(mut words: BTreeSet<String>) -> Self {
        words.extend(REQUIRED_STOP_WORDS.iter().map(|w| w.to_string()));
        StopList { words }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// Order-preserving filter.
pub fn remove_stopwords(tokens: &[String], stop: &StopList) -> Vec<String> {
    tokens.iter().filter(|t| !stop.contains(t)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn default_list_examples() {
        let stop = StopList::default();
        assert!(stop.len() >= 150);
        assert_eq!(remove_stopwords(&toks(&["this", "is", "food"]), &stop), ["food"]);
        assert!(remove_stopwords(&[], &stop).is_empty());
        assert!(remove_stopwords(&toks(&["is", "and", "has", "like"]), &stop).is_empty());
        for w in ["i", "am", "so", "that", "the", "for", "us"] {
            assert!(stop.contains(w), "{w}");
        }
        for w in ["happy", "red", "cross", "offers", "shelters", "food", "needed"] {
            assert!(!stop.contains(w), "{w}");
        }
    }

    #[test]
    fn custom_list_keeps_required_words_and_comments() {
        let stop = StopList::parse("# comment\nfoo\n\nBar\n");
        assert!(stop.contains("foo"));
        assert!(stop.contains("bar"));
        assert!(!stop.contains("# comment"));
        for w in REQUIRED_STOP_WORDS {
            assert!(stop.contains(w));
        }
    }
}
