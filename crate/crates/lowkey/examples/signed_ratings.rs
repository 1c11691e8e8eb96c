//! Build an adversarial graph from signed ratings.
//!
//! Ratings run from -10 (total distrust) to +10 (total trust). Only the
//! negative ones become edges, weighted by magnitude, so the graph that
//! comes out is the distrust skeleton of the community. Users who only
//! ever receive praise never appear in it.

use anyhow::Result;
use lowkey::ingest::{DatasetDescriptor, Format};
use lowkey::pipeline::{analyze_file, AnalysisOptions};

fn main() -> Result<()> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/synthetic/traders.signed.csv"
    );
    let descriptor = DatasetDescriptor::new(path, Format::SignedEdgeList);
    let (outcome, meta) = analyze_file(&descriptor, &AnalysisOptions::default())?;

    println!(
        "kept the negative ratings: {} users, {} distrust edges, weight {}",
        meta.nodes, meta.edges, meta.total_weight
    );

    // The three sharpest CON/PageRank contrasts.
    for r in outcome.report.records().iter().take(3) {
        println!(
            "  user {:<4} epsilon {:>7.4} (con {:>3}, pagerank {:.6})",
            r.label, r.epsilon, r.con, r.pr
        );
    }

    let verdict = outcome.verdict();
    assert!(verdict.exists, "this fixture is built to contain a leader");
    println!(
        "leader: user {} with strength {:.6}",
        verdict.leaders[0].label, verdict.epsilon_max
    );
    Ok(())
}
