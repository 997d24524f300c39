use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sentiment toward the disaster response.
///
/// `Positive` is stored as `0` and `Negative` as `1`. Class `1` is the
/// detection target for confusion matrices and ROC curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Label {
    Positive = 0,
    Negative = 1,
}

impl Label {
    pub const BOTH: [Label; 2] = [Label::Positive, Label::Negative];

    pub fn as_u8(self) -> u8 {
        self as u8
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// `true` for class 1.
    pub fn is_target(self) -> bool {
        self == Label::Negative
    }

    pub fn from_target(is_target: bool) -> Self {
        if is_target {
            Label::Negative
        } else {
            Label::Positive
        }
    }

    /// `+1.0` for class 1, `-1.0` for class 0.
    pub fn sign(self) -> f64 {
        if self.is_target() {
            1.0
        } else {
            -1.0
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        }
    }
}

impl From<Label> for u8 {
    fn from(l: Label) -> u8 {
        l.as_u8()
    }
}

impl TryFrom<u8> for Label {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Label::Positive),
            1 => Ok(Label::Negative),
            other => Err(Error::InvalidParameter(format!("label must be 0 or 1, got {other}"))),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// Relief-demand taxonomy taken from the collection keywords.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeedCategory {
    Housing,
    Transportation,
    Food,
    MedicalSupplies,
}

impl NeedCategory {
    pub const ALL: [NeedCategory; 4] = [
        NeedCategory::Housing,
        NeedCategory::Transportation,
        NeedCategory::Food,
        NeedCategory::MedicalSupplies,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NeedCategory::Housing => "housing",
            NeedCategory::Transportation => "transportation",
            NeedCategory::Food => "food",
            NeedCategory::MedicalSupplies => "medical_supplies",
        }
    }
}

impl fmt::Display for NeedCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NeedCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .map(|c| if c == ' ' || c == '-' { '_' } else { c })
            .collect();
        match norm.as_str() {
            "housing" => Ok(NeedCategory::Housing),
            "transportation" => Ok(NeedCategory::Transportation),
            "food" => Ok(NeedCategory::Food),
            "medical_supplies" | "medical" => Ok(NeedCategory::MedicalSupplies),
            _ => Err(Error::InvalidParameter(format!("unknown need category {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisasterType {
    Tornado,
    Hurricane,
    Flood,
    Blizzard,
    Wildfire,
}

/// One social-media post.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tweet {
    pub id: String,
    pub text: String,
    pub timestamp: Option<DateTime<Utc>>,
    pub disaster_id: String,
    /// `None` only when an upstream file carried no usable need information.
    pub need_category: Option<NeedCategory>,
    pub label: Option<Label>,
}

/// Identity, duration, collection window, and keywords of one disaster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisasterSpec {
    pub disaster_id: String,
    pub name: String,
    pub disaster_type: DisasterType,
    pub duration_start: NaiveDate,
    pub duration_end: NaiveDate,
    pub window_start: NaiveDate,
    pub window_end: NaiveDate,
    pub keywords: Vec<String>,
    /// Lowercase fragment used to recognise this disaster's file in a
    /// directory of published corpus files.
    #[serde(default)]
    pub file_hint: Option<String>,
}

/// Where a day falls relative to a disaster's duration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Before,
    During,
    After,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Before => "before",
            Phase::During => "during",
            Phase::After => "after",
        }
    }
}

impl DisasterSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(format!("disaster {}: {msg}", self.disaster_id)));
        if self.duration_start > self.duration_end {
            return bad("duration_start after duration_end");
        }
        if self.window_start > self.duration_start {
            return bad("collection window starts after the disaster");
        }
        if self.duration_end > self.window_end {
            return bad("collection window ends before the disaster");
        }
        // Windows extend the duration by about a week on each side.
        let before = (self.duration_start - self.window_start).num_days();
        let after = (self.window_end - self.duration_end).num_days();
        if !(1..=14).contains(&before) || !(1..=14).contains(&after) {
            return bad("collection window should extend the duration by roughly one week each side");
        }
        if self.keywords.is_empty() {
            return bad("no collection keywords");
        }
        Ok(())
    }

    pub fn phase_of(&self, day: NaiveDate) -> Phase {
        if day < self.duration_start {
            Phase::Before
        } else if day > self.duration_end {
            Phase::After
        } else {
            Phase::During
        }
    }

    pub fn in_window(&self, day: NaiveDate) -> bool {
        day >= self.window_start && day <= self.window_end
    }
}

/// One disaster's tweets, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub spec: DisasterSpec,
    pub tweets: Vec<Tweet>,
}

impl Dataset {
    pub fn new(spec: DisasterSpec, tweets: Vec<Tweet>) -> Result<Self> {
        if let Some(t) = tweets.iter().find(|t| t.disaster_id != spec.disaster_id) {
            return Err(Error::InvalidParameter(format!(
                "tweet {} belongs to {}, not {}",
                t.id, t.disaster_id, spec.disaster_id
            )));
        }
        Ok(Dataset { spec, tweets })
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }

    /// Labels of every tweet; errors on the first unlabeled one.
    pub fn labels(&self) -> Result<Vec<Label>> {
        self.tweets
            .iter()
            .map(|t| t.label.ok_or_else(|| Error::Unlabeled { id: t.id.clone() }))
            .collect()
    }

    /// Tweets whose timestamp falls outside the collection window. These are
    /// kept in the dataset; analytics reports them separately.
    pub fn outside_window(&self) -> impl Iterator<Item = &Tweet> {
        self.tweets.iter().filter(|t| {
            t.timestamp
                .map(|ts| !self.spec.in_window(ts.date_naive()))
                .unwrap_or(false)
        })
    }

    /// Keeps the tweets at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            spec: self.spec.clone(),
            tweets: indices.iter().map(|&i| self.tweets[i].clone()).collect(),
        }
    }
}
