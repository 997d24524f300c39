//! JSON model files tied to the vocabulary they were trained against.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ClassifierModel;
use crate::error::{Error, Result};
use crate::features::{FeatureConfig, Vocabulary};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub format_version: u32,
    pub vocabulary_fingerprint: String,
    pub features: FeatureConfig,
    pub classifier: ClassifierModel,
}

impl SavedModel {
    pub fn new(classifier: ClassifierModel, vocab: &Vocabulary, features: FeatureConfig) -> Self {
        SavedModel {
            format_version: MODEL_FORMAT_VERSION,
            vocabulary_fingerprint: vocab.fingerprint(),
            features,
            classifier,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: SavedModel = serde_json::from_str(text)?;
        if m.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Config(format!(
                "model format version {} is not supported (expected {MODEL_FORMAT_VERSION})",
                m.format_version
            )));
        }
        Ok(m)
    }

    /// Writes the JSON form, creating parent directories as needed.
    pub fn save(&self, path: &Path) -> Result<()> {
        crate::evaluate::report::write_text(path, &self.to_json()?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// The classifier, provided `vocab` is the one it was trained against.
    pub fn classifier_for(&self, vocab: &Vocabulary) -> Result<&ClassifierModel> {
        let found = vocab.fingerprint();
        if found != self.vocabulary_fingerprint {
            return Err(Error::FingerprintMismatch {
                expected: self.vocabulary_fingerprint.clone(),
                found,
            });
        }
        Ok(&self.classifier)
    }
}
