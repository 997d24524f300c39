//! Writes one seeded synthetic CSV per registered disaster, in the canonical
//! layout the loader and the CLI accept.
//!
//! cargo run --example synthetic_corpus -- OUT_DIR [TWEETS_PER_DISASTER] [SEED]

use std::path::PathBuf;

use disaster_sentiment::corpus::synthetic::{disaster_like, SyntheticParams};
use disaster_sentiment::corpus::{write_canonical_file, Registry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "synthetic-corpus".into()));
    let n_docs: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(400);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(7);

    let registry = Registry::builtin();
    for spec in &registry.disasters {
        let params = SyntheticParams {
            n_docs,
            ..Default::default()
        };
        let ds = disaster_like(spec, &params, seed);
        let path = out.join(format!("{}.csv", spec.disaster_id));
        write_canonical_file(&path, &ds)?;
        println!("{}: {} tweets -> {}", spec.disaster_id, ds.len(), path.display());
    }
    Ok(())
}
