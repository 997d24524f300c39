use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{attitude_by_need, daily_volume, need_breakdown, proportions_by_disaster, sentiment_proportions};
use crate::corpus::{Dataset, Label, Phase};
use crate::error::Result;
use crate::evaluate::report::{csv_string, write_text};
use crate::plot::{bar_chart, line_chart, Series};

/// Figure numbers for one disaster group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupFigures {
    pub group: &'static str,
    pub shares: u8,
    pub needs: u8,
    pub attitudes: u8,
    pub volume: u8,
}

impl GroupFigures {
    pub const TYPES: GroupFigures = GroupFigures {
        group: "types",
        shares: 2,
        needs: 3,
        attitudes: 4,
        volume: 5,
    };
    pub const HURRICANES: GroupFigures = GroupFigures {
        group: "hurricanes",
        shares: 6,
        needs: 7,
        attitudes: 8,
        volume: 9,
    };

    pub fn for_group(name: &str) -> Option<GroupFigures> {
        [Self::TYPES, Self::HURRICANES].into_iter().find(|g| g.group == name)
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct DisasterSummary {
    pub tweets: usize,
    pub negative_share: Option<f64>,
    pub modal_need: Option<String>,
    pub most_negative_need: Option<String>,
    pub before: usize,
    pub during: usize,
    pub after: usize,
    pub missing_timestamp: usize,
    pub outside_window: usize,
}

/// Files written by [`write_bundle`] and per-table failures.
#[derive(Debug, Clone, Default, Serialize)]
pub struct FigureBundle {
    pub files: Vec<PathBuf>,
    pub disasters: BTreeMap<String, DisasterSummary>,
    /// `(file stem, message)` for tables that could not be computed.
    pub errors: Vec<(String, String)>,
}

fn share_str(v: f64) -> String {
    format!("{v}")
}

impl FigureBundle {
    fn emit(&mut self, path: PathBuf, text: &str) -> Result<()> {
        write_text(&path, text)?;
        self.files.push(path);
        Ok(())
    }
}

/// Writes the analytics tables for each group. With `group_tables` off only
/// the per-disaster tables are written. SVG charts accompany every CSV when
/// `plots` is set. Errors in one table are recorded and the rest still run.
pub fn write_bundle(
    out: &Path,
    groups: &[(GroupFigures, Vec<&Dataset>)],
    group_tables: bool,
    plots: bool,
) -> Result<FigureBundle> {
    let mut bundle = FigureBundle::default();
    for (figs, datasets) in groups {
        if datasets.is_empty() {
            continue;
        }
        if group_tables {
            shares_figure(&mut bundle, out, figs, datasets, plots)?;
            needs_figure(&mut bundle, out, figs, datasets, plots)?;
        }
        for ds in datasets {
            let id = &ds.spec.disaster_id;
            summarize(&mut bundle, ds);
            let stem = format!("fig{}_{id}", figs.attitudes);
            match attitude_by_need(ds) {
                Ok(table) => {
                    let mut rows = Vec::new();
                    for (need, neg) in &table.negative_share {
                        for l in Label::BOTH {
                            let row = table.cells.get(&super::AttitudeTable::cell_key(need, l)).expect("cell present");
                            rows.push(vec![
                                need.clone(),
                                l.name().to_string(),
                                row.count.to_string(),
                                share_str(row.share),
                                neg.map(share_str).unwrap_or_else(|| crate::evaluate::report::UNDEFINED.to_string()),
                            ]);
                        }
                    }
                    let csv = csv_string(&["need", "sentiment", "count", "share", "need_negative_share"], rows)?;
                    bundle.emit(out.join(format!("{stem}.csv")), &csv)?;
                    if plots {
                        let needs: Vec<String> = table.negative_share.iter().map(|(n, _)| n.clone()).collect();
                        let series: Vec<(&str, Vec<f64>)> = Label::BOTH
                            .iter()
                            .map(|&l| {
                                let counts = needs
                                    .iter()
                                    .map(|n| table.cells.count(&super::AttitudeTable::cell_key(n, l)) as f64)
                                    .collect();
                                (l.name(), counts)
                            })
                            .collect();
                        let svg = bar_chart(&format!("Attitudes by need: {}", ds.spec.name), "tweets", &needs, &series);
                        bundle.emit(out.join(format!("{stem}.svg")), &svg)?;
                    }
                }
                Err(e) => bundle.errors.push((stem, e.to_string())),
            }

            let vol = daily_volume(ds);
            let stem = format!("fig{}_{id}", figs.volume);
            let rows = vol
                .days
                .iter()
                .zip(&vol.table.rows)
                .map(|(d, r)| vec![d.day.to_string(), d.phase.as_str().to_string(), d.count.to_string(), share_str(r.share)])
                .collect();
            let csv = csv_string(&["day", "phase", "count", "share"], rows)?;
            bundle.emit(out.join(format!("{stem}.csv")), &csv)?;
            if plots {
                let all: Vec<(f64, f64)> = vol.days.iter().enumerate().map(|(i, d)| (i as f64, d.count as f64)).collect();
                let during: Vec<(f64, f64)> = vol
                    .days
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| d.phase == Phase::During)
                    .map(|(i, d)| (i as f64, d.count as f64))
                    .collect();
                let y_max = all.iter().map(|p| p.1).fold(1.0, f64::max);
                let svg = line_chart(
                    &format!("Daily tweets: {}", ds.spec.name),
                    &format!("days since {}", ds.spec.window_start),
                    "tweets",
                    (0.0, (all.len().max(2) - 1) as f64),
                    (0.0, y_max),
                    &[
                        Series {
                            name: "before/after",
                            points: all,
                        },
                        Series {
                            name: "during",
                            points: during,
                        },
                    ],
                    false,
                );
                bundle.emit(out.join(format!("{stem}.svg")), &svg)?;
            }
        }
    }
    let summary = serde_json::to_string_pretty(&bundle.disasters)? + "\n";
    bundle.emit(out.join("analytics_summary.json"), &summary)?;
    Ok(bundle)
}

fn summarize(bundle: &mut FigureBundle, ds: &Dataset) {
    let vol = daily_volume(ds);
    let needs = need_breakdown(ds);
    let summary = DisasterSummary {
        tweets: ds.len(),
        negative_share: sentiment_proportions(ds).ok().map(|t| t.share(Label::Negative.name())),
        modal_need: needs.modal().filter(|r| r.count > 0).map(|r| r.key.clone()),
        most_negative_need: attitude_by_need(ds).ok().and_then(|t| t.most_negative().map(str::to_string)),
        before: vol.phase_total(Phase::Before),
        during: vol.phase_total(Phase::During),
        after: vol.phase_total(Phase::After),
        missing_timestamp: vol.missing_timestamp,
        outside_window: vol.outside_window,
    };
    bundle.disasters.insert(ds.spec.disaster_id.clone(), summary);
}

fn shares_figure(bundle: &mut FigureBundle, out: &Path, figs: &GroupFigures, datasets: &[&Dataset], plots: bool) -> Result<()> {
    let stem = format!("fig{}", figs.shares);
    let table = proportions_by_disaster(datasets)?;
    let mut rows = Vec::new();
    let mut sentiment_shares = Vec::new();
    for (ds, row) in datasets.iter().zip(&table.rows) {
        let sentiment = match sentiment_proportions(ds) {
            Ok(s) => s,
            Err(e) => {
                bundle.errors.push((stem.clone(), format!("{}: {e}", ds.spec.disaster_id)));
                return Ok(());
            }
        };
        sentiment_shares.push(sentiment.rows.iter().map(|r| r.share).collect::<Vec<_>>());
        let mut r = vec![
            row.key.clone(),
            ds.spec.name.clone(),
            row.count.to_string(),
            share_str(row.share),
            table.percent(&row.key).to_string(),
        ];
        r.extend(sentiment.rows.iter().map(|s| s.count.to_string()));
        r.extend(sentiment.rows.iter().map(|s| share_str(s.share)));
        rows.push(r);
    }
    let csv = csv_string(
        &[
            "disaster",
            "name",
            "count",
            "share",
            "percent",
            "positive",
            "negative",
            "positive_share",
            "negative_share",
        ],
        rows,
    )?;
    bundle.emit(out.join(format!("{stem}.csv")), &csv)?;
    if plots {
        let names: Vec<String> = datasets.iter().map(|d| d.spec.name.clone()).collect();
        let series = vec![
            ("share of tweets", table.rows.iter().map(|r| r.share).collect()),
            ("positive", sentiment_shares.iter().map(|s| s[0]).collect()),
            ("negative", sentiment_shares.iter().map(|s| s[1]).collect()),
        ];
        let svg = bar_chart(&format!("Tweet proportions ({})", figs.group), "share", &names, &series);
        bundle.emit(out.join(format!("{stem}.svg")), &svg)?;
    }
    Ok(())
}

fn needs_figure(bundle: &mut FigureBundle, out: &Path, figs: &GroupFigures, datasets: &[&Dataset], plots: bool) -> Result<()> {
    let stem = format!("fig{}", figs.needs);
    let tables: Vec<_> = datasets.iter().map(|ds| need_breakdown(ds)).collect();
    let mut rows = Vec::new();
    for (ds, t) in datasets.iter().zip(&tables) {
        for r in &t.rows {
            rows.push(vec![
                ds.spec.disaster_id.clone(),
                r.key.clone(),
                r.count.to_string(),
                share_str(r.share),
                t.percent(&r.key).to_string(),
            ]);
        }
    }
    let csv = csv_string(&["disaster", "need", "count", "share", "percent"], rows)?;
    bundle.emit(out.join(format!("{stem}.csv")), &csv)?;
    if plots {
        let names: Vec<String> = datasets.iter().map(|d| d.spec.name.clone()).collect();
        let needs: Vec<String> = crate::corpus::NeedCategory::ALL.iter().map(|n| n.to_string()).collect();
        let series: Vec<(&str, Vec<f64>)> = needs
            .iter()
            .map(|n| (n.as_str(), tables.iter().map(|t| t.share(n)).collect()))
            .collect();
        let svg = bar_chart(&format!("Needs ({})", figs.group), "share", &names, &series);
        bundle.emit(out.join(format!("{stem}.svg")), &svg)?;
    }
    Ok(())
}
