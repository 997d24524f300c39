//! Corpus breakdowns: share per disaster, sentiment split, need categories,
//! attitude by need, and daily tweet volume.

mod figures;

use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::Serialize;

use crate::corpus::{Dataset, Label, NeedCategory, Phase};
use crate::error::{Error, Result};

pub use figures::{write_bundle, FigureBundle, GroupFigures};

/// Row key used for tweets whose need category is unknown.
pub const UNKNOWN_NEED: &str = "unknown";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakdownRow {
    pub key: String,
    pub count: usize,
    /// `count / total`; 0 when the table is empty.
    pub share: f64,
}

/// Counts and shares over a set of keys. Shares sum to 1 whenever `total > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakdownTable {
    pub rows: Vec<BreakdownRow>,
    pub total: usize,
}

impl BreakdownTable {
    /// Builds a table from `(key, count)` pairs, keeping their order.
    pub fn from_counts<K: Into<String>>(counts: impl IntoIterator<Item = (K, usize)>) -> Self {
        let pairs: Vec<(String, usize)> = counts.into_iter().map(|(k, c)| (k.into(), c)).collect();
        let total: usize = pairs.iter().map(|(_, c)| c).sum();
        let rows = pairs
            .into_iter()
            .map(|(key, count)| BreakdownRow {
                key,
                count,
                share: if total == 0 { 0.0 } else { count as f64 / total as f64 },
            })
            .collect();
        BreakdownTable { rows, total }
    }

    pub fn get(&self, key: &str) -> Option<&BreakdownRow> {
        self.rows.iter().find(|r| r.key == key)
    }

    pub fn share(&self, key: &str) -> f64 {
        self.get(key).map_or(0.0, |r| r.share)
    }

    pub fn count(&self, key: &str) -> usize {
        self.get(key).map_or(0, |r| r.count)
    }

    /// Row with the largest count; ties go to the earliest row.
    pub fn modal(&self) -> Option<&BreakdownRow> {
        self.rows.iter().fold(None, |best: Option<&BreakdownRow>, r| match best {
            Some(b) if b.count >= r.count => Some(b),
            _ => Some(r),
        })
    }

    /// Share rounded to whole percent.
    pub fn percent(&self, key: &str) -> u32 {
        (self.share(key) * 100.0).round() as u32
    }
}

/// Tweet count and share of the group total per disaster, in the given order.
pub fn proportions_by_disaster(group: &[&Dataset]) -> Result<BreakdownTable> {
    if group.is_empty() {
        return Err(Error::InvalidParameter("no datasets in group".into()));
    }
    Ok(BreakdownTable::from_counts(
        group.iter().map(|ds| (ds.spec.disaster_id.clone(), ds.len())),
    ))
}

/// Label 0 and label 1 counts. Every tweet must be labeled.
pub fn sentiment_proportions(ds: &Dataset) -> Result<BreakdownTable> {
    if ds.is_empty() {
        return Err(Error::InvalidParameter(format!("{}: no labeled tweets", ds.spec.disaster_id)));
    }
    let mut counts = [0usize; 2];
    for l in ds.labels()? {
        counts[l.index()] += 1;
    }
    Ok(BreakdownTable::from_counts(Label::BOTH.map(|l| (l.name(), counts[l.index()]))))
}

fn need_key(need: Option<NeedCategory>) -> &'static str {
    need.map_or(UNKNOWN_NEED, NeedCategory::as_str)
}

/// Tweets per need category. All four categories are always present; an
/// `unknown` row appears only when some tweet has no category.
pub fn need_breakdown(ds: &Dataset) -> BreakdownTable {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in &ds.tweets {
        *counts.entry(need_key(t.need_category)).or_default() += 1;
    }
    let mut rows: Vec<(&str, usize)> = NeedCategory::ALL
        .iter()
        .map(|n| (n.as_str(), counts.get(n.as_str()).copied().unwrap_or(0)))
        .collect();
    if let Some(&c) = counts.get(UNKNOWN_NEED) {
        rows.push((UNKNOWN_NEED, c));
    }
    BreakdownTable::from_counts(rows)
}

/// Need × sentiment crosstab plus the negative share within each need.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttitudeTable {
    /// Keys are `<need>/<sentiment>`, needs in canonical order, label 0 first.
    pub cells: BreakdownTable,
    /// Negative count over the need's count; `None` for needs with no tweets.
    pub negative_share: Vec<(String, Option<f64>)>,
}

impl AttitudeTable {
    pub fn cell_key(need: &str, label: Label) -> String {
        format!("{need}/{}", label.name())
    }

    /// Need with the highest negative share; ties go to canonical order.
    pub fn most_negative(&self) -> Option<&str> {
        let mut best: Option<(&str, f64)> = None;
        for (need, share) in &self.negative_share {
            if let Some(s) = *share {
                if best.is_none_or(|(_, b)| s > b) {
                    best = Some((need, s));
                }
            }
        }
        best.map(|(n, _)| n)
    }
}

pub fn attitude_by_need(ds: &Dataset) -> Result<AttitudeTable> {
    let mut counts: BTreeMap<&str, [usize; 2]> = BTreeMap::new();
    for t in &ds.tweets {
        let label = t.label.ok_or_else(|| Error::Unlabeled { id: t.id.clone() })?;
        counts.entry(need_key(t.need_category)).or_default()[label.index()] += 1;
    }
    let mut needs: Vec<&str> = NeedCategory::ALL.iter().map(|n| n.as_str()).collect();
    if counts.contains_key(UNKNOWN_NEED) {
        needs.push(UNKNOWN_NEED);
    }
    let mut cells = Vec::new();
    let mut negative_share = Vec::new();
    for need in needs {
        let c = counts.get(need).copied().unwrap_or_default();
        for l in Label::BOTH {
            cells.push((AttitudeTable::cell_key(need, l), c[l.index()]));
        }
        let n = c[0] + c[1];
        negative_share.push((need.to_string(), (n > 0).then(|| c[1] as f64 / n as f64)));
    }
    Ok(AttitudeTable {
        cells: BreakdownTable::from_counts(cells),
        negative_share,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DayBucket {
    pub day: NaiveDate,
    pub phase: Phase,
    pub count: usize,
}

/// Per-day counts over the collection window, days bucketed in UTC.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DailyVolume {
    pub days: Vec<DayBucket>,
    /// Keys are ISO dates; one row per window day.
    pub table: BreakdownTable,
    pub missing_timestamp: usize,
    pub outside_window: usize,
}

impl DailyVolume {
    /// Tweets excluded from the series for any reason.
    pub fn excluded(&self) -> usize {
        self.missing_timestamp + self.outside_window
    }

    pub fn phase_total(&self, phase: Phase) -> usize {
        self.days.iter().filter(|d| d.phase == phase).map(|d| d.count).sum()
    }
}

pub fn daily_volume(ds: &Dataset) -> DailyVolume {
    let spec = &ds.spec;
    let mut per_day: BTreeMap<NaiveDate, usize> = BTreeMap::new();
    let mut missing_timestamp = 0;
    let mut outside_window = 0;
    for t in &ds.tweets {
        match t.timestamp {
            None => missing_timestamp += 1,
            Some(ts) => {
                let day = ts.date_naive();
                if spec.in_window(day) {
                    *per_day.entry(day).or_default() += 1;
                } else {
                    outside_window += 1;
                }
            }
        }
    }
    let days: Vec<DayBucket> = spec
        .window_start
        .iter_days()
        .take_while(|d| *d <= spec.window_end)
        .map(|day| DayBucket {
            day,
            phase: spec.phase_of(day),
            count: per_day.get(&day).copied().unwrap_or(0),
        })
        .collect();
    let table = BreakdownTable::from_counts(days.iter().map(|d| (d.day.to_string(), d.count)));
    DailyVolume {
        days,
        table,
        missing_timestamp,
        outside_window,
    }
}

#[cfg(test)]
mod tests;
