//! Share per disaster, sentiment split, need breakdown, attitude by need and
//! daily volume for the hurricane group of a synthetic corpus, plus the
//! CSV/SVG bundle.
//!
//! cargo run --example analytics -- [OUT_DIR]

use std::path::PathBuf;

use disaster_sentiment::analytics::{
    attitude_by_need, daily_volume, need_breakdown, proportions_by_disaster, sentiment_proportions, write_bundle,
    GroupFigures,
};
use disaster_sentiment::corpus::synthetic::{disaster_like, SyntheticParams};
use disaster_sentiment::corpus::{Dataset, Phase, Registry, GROUP_HURRICANES};

fn main() -> disaster_sentiment::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "analytics-out".into()));
    let registry = Registry::builtin();
    let sizes = [210, 530, 770, 430, 720];
    let datasets: Vec<Dataset> = registry
        .group(GROUP_HURRICANES)?
        .iter()
        .zip(sizes)
        .map(|(id, n)| Ok(disaster_like(registry.get(id)?, &SyntheticParams { n_docs: n, ..Default::default() }, 1)))
        .collect::<disaster_sentiment::Result<_>>()?;
    let refs: Vec<&Dataset> = datasets.iter().collect();

    let shares = proportions_by_disaster(&refs)?;
    for r in &shares.rows {
        println!("{:<14} {:>5} tweets  {:>3}%", r.key, r.count, shares.percent(&r.key));
    }
    for ds in &datasets {
        let s = sentiment_proportions(ds)?;
        let needs = need_breakdown(ds);
        let att = attitude_by_need(ds)?;
        let vol = daily_volume(ds);
        println!(
            "{}: negative {:.0}%, modal need {}, most negative need {}, before/during/after {}/{}/{}",
            ds.spec.disaster_id,
            100.0 * s.share("negative"),
            needs.modal().map_or("-", |r| r.key.as_str()),
            att.most_negative().unwrap_or("-"),
            vol.phase_total(Phase::Before),
            vol.phase_total(Phase::During),
            vol.phase_total(Phase::After)
        );
    }
    let bundle = write_bundle(&out, &[(GroupFigures::HURRICANES, refs)], true, true)?;
    println!("wrote {} files to {}", bundle.files.len(), out.display());
    Ok(())
}
