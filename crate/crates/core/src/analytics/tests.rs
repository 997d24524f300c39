use chrono::{NaiveDate, TimeZone, Utc};
use proptest::prelude::*;
use rand::seq::SliceRandom;

use super::*;
use crate::corpus::synthetic::{disaster_like, SyntheticParams};
use crate::corpus::{DisasterSpec, Registry, Tweet};
use crate::rng::stream;

fn spec(id: &str) -> DisasterSpec {
    Registry::builtin().get(id).unwrap().clone()
}

fn tweet(spec: &DisasterSpec, i: usize, need: Option<NeedCategory>, label: Option<Label>, day: Option<NaiveDate>) -> Tweet {
    Tweet {
        id: i.to_string(),
        text: "text".into(),
        timestamp: day.map(|d| Utc.from_utc_datetime(&d.and_hms_opt(23, 59, 59).unwrap())),
        disaster_id: spec.disaster_id.clone(),
        need_category: need,
        label,
    }
}

fn dataset(id: &str, tweets: impl Fn(&DisasterSpec) -> Vec<Tweet>) -> Dataset {
    let s = spec(id);
    let t = tweets(&s);
    Dataset::new(s, t).unwrap()
}

fn assert_conserves(t: &BreakdownTable) {
    assert_eq!(t.rows.iter().map(|r| r.count).sum::<usize>(), t.total);
    if t.total > 0 {
        assert!((t.rows.iter().map(|r| r.share).sum::<f64>() - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn single_dataset_has_full_share() {
    let ds = disaster_like(&spec("tornado_2011"), &SyntheticParams::default(), 1);
    let t = proportions_by_disaster(&[&ds]).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.rows[0].share, 1.0);
    assert_eq!(t.percent("tornado_2011"), 100);
    assert!(proportions_by_disaster(&[]).is_err());
}

#[test]
fn group_shares_follow_counts() {
    let reg = Registry::builtin();
    let sizes = [320, 200, 170, 160, 150];
    let group: Vec<Dataset> = reg
        .group("types")
        .unwrap()
        .iter()
        .zip(sizes)
        .map(|(id, n)| {
            let p = SyntheticParams {
                n_docs: n,
                ..Default::default()
            };
            disaster_like(reg.get(id).unwrap(), &p, 2)
        })
        .collect();
    let refs: Vec<&Dataset> = group.iter().collect();
    let t = proportions_by_disaster(&refs).unwrap();
    assert_eq!(t.total, 1000);
    assert_eq!(t.percent("floods_2013"), 20);
    assert_eq!(t.percent("harvey_2017"), 16);
    assert_eq!(t.percent("tornado_2011"), 32);
    assert_conserves(&t);
}

#[test]
fn sentiment_shares_are_arithmetic() {
    let ds = dataset("sandy_2012", |s| {
        (0..10)
            .map(|i| tweet(s, i, None, Some(Label::from_target(i >= 3)), None))
            .collect()
    });
    let t = sentiment_proportions(&ds).unwrap();
    assert_eq!(t.share("positive"), 0.3);
    assert_eq!(t.share("negative"), 0.7);
    let empty = dataset("sandy_2012", |_| vec![]);
    assert!(sentiment_proportions(&empty).is_err());
    let unlabeled = dataset("sandy_2012", |s| vec![tweet(s, 0, None, None, None)]);
    assert!(matches!(sentiment_proportions(&unlabeled), Err(Error::Unlabeled { .. })));
}

#[test]
fn need_breakdown_counts_categories() {
    let ds = dataset("michael_2018", |s| {
        (0..5).map(|i| tweet(s, i, Some(NeedCategory::Food), None, None)).collect()
    });
    let t = need_breakdown(&ds);
    assert_eq!(t.share("food"), 1.0);
    assert_eq!(t.rows.len(), 4);
    assert_eq!(t.modal().unwrap().key, "food");

    let ds = dataset("michael_2018", |s| {
        vec![
            tweet(s, 0, Some(NeedCategory::Housing), None, None),
            tweet(s, 1, None, None, None),
        ]
    });
    let t = need_breakdown(&ds);
    assert_eq!(t.count(UNKNOWN_NEED), 1);
    assert_eq!(t.share("housing"), 0.5);
}

#[test]
fn uniform_crosstab_has_equal_cells() {
    let ds = dataset("tornado_2011", |s| {
        let mut v = Vec::new();
        for (n, need) in NeedCategory::ALL.iter().enumerate() {
            for l in Label::BOTH {
                for r in 0..3 {
                    v.push(tweet(s, n * 10 + l.index() * 3 + r, Some(*need), Some(l), None));
                }
            }
        }
        v
    });
    let t = attitude_by_need(&ds).unwrap();
    assert_eq!(t.cells.rows.len(), 8);
    assert!(t.cells.rows.iter().all(|r| r.share == 1.0 / 8.0));
    assert!(t.negative_share.iter().all(|(_, s)| *s == Some(0.5)));
}

#[test]
fn most_negative_need_is_found() {
    let ds = dataset("tornado_2011", |s| {
        vec![
            tweet(s, 0, Some(NeedCategory::Housing), Some(Label::Negative), None),
            tweet(s, 1, Some(NeedCategory::Housing), Some(Label::Positive), None),
            tweet(s, 2, Some(NeedCategory::Transportation), Some(Label::Negative), None),
        ]
    });
    let t = attitude_by_need(&ds).unwrap();
    assert_eq!(t.most_negative(), Some("transportation"));
    assert_eq!(t.negative_share[2], ("food".to_string(), None));
    let unlabeled = dataset("tornado_2011", |s| vec![tweet(s, 0, None, None, None)]);
    assert!(attitude_by_need(&unlabeled).is_err());
}

#[test]
fn daily_volume_buckets_by_utc_day() {
    let s = spec("wildfires_2018");
    let day = s.duration_start;
    let ds = dataset("wildfires_2018", |s| (0..4).map(|i| tweet(s, i, None, None, Some(day))).collect());
    let v = daily_volume(&ds);
    let nonzero: Vec<&DayBucket> = v.days.iter().filter(|d| d.count > 0).collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!(nonzero[0].day, day);
    assert_eq!(nonzero[0].phase, Phase::During);
    let window_days = (s.window_end - s.window_start).num_days() as usize + 1;
    assert_eq!(v.days.len(), window_days);
}

#[test]
fn daily_volume_conserves_tweets() {
    let s = spec("blizzard_2016");
    let outside = s.window_end.succ_opt().unwrap();
    let ds = dataset("blizzard_2016", |s| {
        vec![
            tweet(s, 0, None, None, Some(s.window_start)),
            tweet(s, 1, None, None, None),
            tweet(s, 2, None, None, Some(outside)),
            tweet(s, 3, None, None, Some(s.window_end)),
        ]
    });
    let v = daily_volume(&ds);
    assert_eq!(v.missing_timestamp, 1);
    assert_eq!(v.outside_window, 1);
    assert_eq!(v.table.total + v.excluded(), ds.len());
    assert_eq!(v.phase_total(Phase::Before), 1);
    assert_eq!(v.phase_total(Phase::After), 1);
}

#[test]
fn bundle_writes_expected_files() {
    let reg = Registry::builtin();
    let hurricanes: Vec<Dataset> = reg
        .group("hurricanes")
        .unwrap()
        .iter()
        .map(|id| {
            let p = SyntheticParams {
                n_docs: 60,
                ..Default::default()
            };
            disaster_like(reg.get(id).unwrap(), &p, 4)
        })
        .collect();
    let refs: Vec<&Dataset> = hurricanes.iter().collect();
    let dir = tempfile::tempdir().unwrap();
    let b = write_bundle(dir.path(), &[(GroupFigures::HURRICANES, refs.clone())], true, true).unwrap();
    assert!(b.errors.is_empty());
    let names: Vec<String> = b.files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    for n in ["fig6.csv", "fig6.svg", "fig7.csv", "fig8_sandy_2012.csv", "fig9_dorian_2019.svg", "analytics_summary.json"] {
        assert!(names.iter().any(|x| x == n), "{n} missing");
    }
    let fig6 = std::fs::read_to_string(dir.path().join("fig6.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(fig6.as_bytes());
    let total: f64 = rdr.records().map(|r| r.unwrap()[3].parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() <= 1e-9);

    let single = tempfile::tempdir().unwrap();
    let b = write_bundle(single.path(), &[(GroupFigures::HURRICANES, vec![refs[0]])], false, false).unwrap();
    let names: Vec<String> = b.files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    assert_eq!(names, ["fig8_sandy_2012.csv", "fig9_sandy_2012.csv", "analytics_summary.json"]);
}

#[test]
fn unlabeled_tables_are_reported_not_fatal() {
    let ds = dataset("tornado_2011", |s| vec![tweet(s, 0, Some(NeedCategory::Food), None, Some(s.duration_start))]);
    let dir = tempfile::tempdir().unwrap();
    let b = write_bundle(dir.path(), &[(GroupFigures::TYPES, vec![&ds])], true, false).unwrap();
    let stems: Vec<&str> = b.errors.iter().map(|(s, _)| s.as_str()).collect();
    assert_eq!(stems, ["fig2", "fig4_tornado_2011"]);
    assert!(dir.path().join("fig3.csv").exists());
    assert!(dir.path().join("fig5_tornado_2011.csv").exists());
}

proptest! {
    #[test]
    fn breakdowns_conserve_mass_and_ignore_order(seed in any::<u64>(), n in 1usize..120) {
        let p = SyntheticParams { n_docs: n, ..Default::default() };
        let ds = disaster_like(&spec("floods_2013"), &p, seed);
        let mut shuffled = ds.clone();
        shuffled.tweets.shuffle(&mut stream(seed, "shuffle"));
        let a = (sentiment_proportions(&ds).unwrap(), need_breakdown(&ds), attitude_by_need(&ds).unwrap(), daily_volume(&ds));
        let b = (sentiment_proportions(&shuffled).unwrap(), need_breakdown(&shuffled), attitude_by_need(&shuffled).unwrap(), daily_volume(&shuffled));
        for t in [&a.0, &a.1, &a.2.cells, &a.3.table] {
            assert_conserves(t);
        }
        prop_assert_eq!(a.3.table.total + a.3.excluded(), n);
        prop_assert_eq!(a, b);
    }
}
