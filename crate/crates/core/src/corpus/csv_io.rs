//! Canonical CSV reading and writing, plus an adapter for upstream layouts.
//!
//! Canonical header: `id,text,timestamp,disaster_id,need_category,label`.
//! The text field is always quoted; other fields are quoted only when they
//! contain a delimiter, quote, or line break. Timestamps are
//! `YYYY-MM-DDTHH:MM:SSZ` or empty; labels are `0`, `1`, or empty.

use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};
use serde::Serialize;

use super::types::{Dataset, DisasterSpec, Label, NeedCategory, Tweet};
use crate::error::{Error, Result};

pub const CANONICAL_HEADER: [&str; 6] = ["id", "text", "timestamp", "disaster_id", "need_category", "label"];
pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%SZ";

/// Counts gathered while loading one file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub path: PathBuf,
    /// `canonical` or `adapter`.
    pub layout: String,
    pub rows_read: usize,
    pub loaded: usize,
    pub rejected_bad_label: usize,
    pub rejected_empty_text: usize,
    pub rejected_bad_need: usize,
    pub rejected_wrong_disaster: usize,
    /// Retained with a null timestamp.
    pub unparseable_timestamp: usize,
    /// Retained without a need category (adapter only).
    pub unresolved_need: usize,
    /// Retained; timestamp lies outside the collection window.
    pub outside_window: usize,
    /// File line numbers of rejected rows.
    pub rejected_lines: Vec<u64>,
}

impl LoadReport {
    pub fn rejected(&self) -> usize {
        self.rejected_bad_label + self.rejected_empty_text + self.rejected_bad_need + self.rejected_wrong_disaster
    }
}

/// Loads a dataset file, auto-detecting the canonical layout or falling back
/// to the column adapter for the published files.
pub fn load_dataset(path: &Path, spec: &DisasterSpec) -> Result<(Dataset, LoadReport)> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.iter().all(|b| b.is_ascii_whitespace()) {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    load_from_reader(&bytes[..], path, spec)
}

pub fn load_from_reader<R: std::io::Read>(
    reader: R,
    path: &Path,
    spec: &DisasterSpec,
) -> Result<(Dataset, LoadReport)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header: Vec<String> = rdr
        .headers()?
        .iter()
        .map(|h| h.trim_start_matches('\u{feff}').trim().to_ascii_lowercase())
        .collect();
    let layout = if header.iter().map(String::as_str).eq(CANONICAL_HEADER.iter().copied()) {
        Layout::Canonical
    } else {
        Layout::Adapter(AdapterColumns::detect(&header).ok_or_else(|| Error::MalformedHeader {
            path: path.to_path_buf(),
            detail: format!(
                "expected `{}` or a published layout with a text column, got `{}`",
                CANONICAL_HEADER.join(","),
                header.join(",")
            ),
        })?)
    };

    let mut report = LoadReport {
        path: path.to_path_buf(),
        layout: match layout {
            Layout::Canonical => "canonical".into(),
            Layout::Adapter(_) => "adapter".into(),
        },
        ..Default::default()
    };
    let mut tweets = Vec::new();
    for (row_no, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        report.rows_read += 1;
        let parsed = match &layout {
            Layout::Canonical => parse_canonical(&record, spec, &mut report),
            Layout::Adapter(cols) => parse_adapter(&record, cols, row_no, spec, &mut report),
        };
        match parsed {
            Some(t) => {
                if let Some(ts) = t.timestamp {
                    if !spec.in_window(ts.date_naive()) {
                        report.outside_window += 1;
                    }
                }
                tweets.push(t);
            }
            None => report.rejected_lines.push(line),
        }
    }
    if report.rows_read == 0 {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    report.loaded = tweets.len();
    Ok((Dataset::new(spec.clone(), tweets)?, report))
}

enum Layout {
    Canonical,
    Adapter(AdapterColumns),
}

fn parse_canonical(rec: &csv::StringRecord, spec: &DisasterSpec, report: &mut LoadReport) -> Option<Tweet> {
    let field = |i: usize| rec.get(i).unwrap_or("");
    let text = field(1);
    if text.trim().is_empty() {
        report.rejected_empty_text += 1;
        return None;
    }
    if field(3) != spec.disaster_id {
        report.rejected_wrong_disaster += 1;
        return None;
    }
    let need_category = match field(4) {
        "" => None,
        s => match s.parse::<NeedCategory>() {
            Ok(n) if n.as_str() == s => Some(n),
            _ => {
                report.rejected_bad_need += 1;
                return None;
            }
        },
    };
    let label = match field(5) {
        "" => None,
        "0" => Some(Label::Positive),
        "1" => Some(Label::Negative),
        _ => {
            report.rejected_bad_label += 1;
            return None;
        }
    };
    let timestamp = match field(2) {
        "" => None,
        s => match NaiveDateTime::parse_from_str(s, TIMESTAMP_FORMAT) {
            Ok(dt) => Some(dt.and_utc()),
            Err(_) => {
                report.unparseable_timestamp += 1;
                None
            }
        },
    };
    Some(Tweet {
        id: field(0).to_string(),
        text: text.to_string(),
        timestamp,
        disaster_id: spec.disaster_id.clone(),
        need_category,
        label,
    })
}

/// Column positions recognised in upstream files. Header names are matched
/// case-insensitively against a few common spellings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdapterColumns {
    pub text: usize,
    pub id: Option<usize>,
    pub timestamp: Option<usize>,
    pub label: Option<usize>,
    pub need: Option<usize>,
}

impl AdapterColumns {
    pub fn detect(header: &[String]) -> Option<Self> {
        let find = |names: &[&str]| header.iter().position(|h| names.contains(&h.as_str()));
        Some(AdapterColumns {
            text: find(&["text", "tweet", "tweets", "content", "full_text", "tweet_text"])?,
            id: find(&["id", "tweet_id", "id_str", "status_id"]),
            timestamp: find(&["timestamp", "date", "time", "created_at", "datetime", "date_time"]),
            label: find(&["label", "sentiment", "class", "target", "polarity"]),
            need: find(&["need_category", "need", "category", "keyword", "supply"]),
        })
    }
}

fn parse_adapter(
    rec: &csv::StringRecord,
    cols: &AdapterColumns,
    row_no: usize,
    spec: &DisasterSpec,
    report: &mut LoadReport,
) -> Option<Tweet> {
    let get = |c: Option<usize>| c.and_then(|i| rec.get(i)).map(str::trim).unwrap_or("");
    let text = rec.get(cols.text).unwrap_or("");
    if text.trim().is_empty() {
        report.rejected_empty_text += 1;
        return None;
    }
    let label = match get(cols.label) {
        "" => None,
        s => match parse_flexible_label(s) {
            Some(l) => Some(l),
            None => {
                report.rejected_bad_label += 1;
                return None;
            }
        },
    };
    let timestamp = match get(cols.timestamp) {
        "" => None,
        s => {
            let ts = parse_flexible_timestamp(s);
            if ts.is_none() {
                report.unparseable_timestamp += 1;
            }
            ts
        }
    };
    let need_category = get(cols.need)
        .parse::<NeedCategory>()
        .ok()
        .or_else(|| infer_need(text));
    if need_category.is_none() {
        report.unresolved_need += 1;
    }
    let id = match get(cols.id) {
        "" => format!("{}-{}", spec.disaster_id, row_no + 1),
        s => s.to_string(),
    };
    Some(Tweet {
        id,
        text: text.to_string(),
        timestamp,
        disaster_id: spec.disaster_id.clone(),
        need_category,
        label,
    })
}

fn parse_flexible_label(s: &str) -> Option<Label> {
    match s.to_ascii_lowercase().as_str() {
        "0" | "0.0" | "positive" | "pos" => Some(Label::Positive),
        "1" | "1.0" | "negative" | "neg" => Some(Label::Negative),
        _ => None,
    }
}

pub fn parse_flexible_timestamp(s: &str) -> Option<DateTime<Utc>> {
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.with_timezone(&Utc));
    }
    if let Ok(dt) = DateTime::parse_from_str(s, "%a %b %d %H:%M:%S %z %Y") {
        return Some(dt.with_timezone(&Utc));
    }
    const NAIVE: [&str; 6] = [
        TIMESTAMP_FORMAT,
        "%Y-%m-%d %H:%M:%S",
        "%Y-%m-%d %H:%M",
        "%m/%d/%Y %H:%M:%S",
        "%m/%d/%Y %H:%M",
        "%Y-%m-%dT%H:%M:%S",
    ];
    for fmt in NAIVE {
        if let Ok(dt) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(dt.and_utc());
        }
    }
    for fmt in ["%Y-%m-%d", "%m/%d/%Y", "%m/%d/%y"] {
        if let Ok(d) = NaiveDate::parse_from_str(s, fmt) {
            return d.and_hms_opt(0, 0, 0).map(|dt| dt.and_utc());
        }
    }
    None
}

/// Need category from the collection keyword that occurs first in the text.
pub fn infer_need(text: &str) -> Option<NeedCategory> {
    const KEYWORDS: [(&str, NeedCategory); 5] = [
        ("housing", NeedCategory::Housing),
        ("transportation", NeedCategory::Transportation),
        ("food", NeedCategory::Food),
        ("medical supplies", NeedCategory::MedicalSupplies),
        ("medical", NeedCategory::MedicalSupplies),
    ];
    let lower = text.to_lowercase();
    KEYWORDS
        .iter()
        .filter_map(|(kw, need)| find_word(&lower, kw).map(|pos| (pos, *need)))
        .min_by_key(|(pos, _)| *pos)
        .map(|(_, need)| need)
}

fn find_word(haystack: &str, word: &str) -> Option<usize> {
    let bytes = haystack.as_bytes();
    let mut start = 0;
    while let Some(off) = haystack[start..].find(word) {
        let pos = start + off;
        let end = pos + word.len();
        let before_ok = pos == 0 || !bytes[pos - 1].is_ascii_alphanumeric();
        let after_ok = end == bytes.len() || !bytes[end].is_ascii_alphanumeric();
        if before_ok && after_ok {
            return Some(pos);
        }
        start = pos + 1;
        while !haystack.is_char_boundary(start) {
            start += 1;
        }
    }
    None
}

fn quote_if_needed(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        quote(field)
    } else {
        field.to_string()
    }
}

fn quote(field: &str) -> String {
    format!("\"{}\"", field.replace('"', "\"\""))
}

/// Writes tweets in canonical CSV with LF line endings.
pub fn write_canonical<W: Write>(mut w: W, tweets: &[Tweet]) -> std::io::Result<()> {
    writeln!(w, "{}", CANONICAL_HEADER.join(","))?;
    for t in tweets {
        let ts = t
            .timestamp
            .map(|ts| ts.format(TIMESTAMP_FORMAT).to_string())
            .unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{}",
            quote_if_needed(&t.id),
            quote(&t.text),
            ts,
            quote_if_needed(&t.disaster_id),
            t.need_category.map(|n| n.as_str()).unwrap_or(""),
            t.label.map(|l| l.to_string()).unwrap_or_default(),
        )?;
    }
    Ok(())
}

pub fn write_canonical_file(path: &Path, ds: &Dataset) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut buf = Vec::new();
    write_canonical(&mut buf, &ds.tweets).map_err(|e| Error::io(path, e))?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}
