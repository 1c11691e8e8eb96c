//! Weighted flows: count-based vs volume-based scoring, and how the
//! verdict reacts to the detection threshold.
//!
//! In the deficits fixture an edge points from the surplus country to the
//! deficit country, weighted by the imbalance. Binarized CON asks "how
//! many deficit partners do two countries share"; weighted CON asks "how
//! much imbalance do they jointly impose". Both agree on who the leader
//! is here, but not on how strong it looks.

use anyhow::Result;
use lowkey::centrality::ConMode;
use lowkey::ingest::{DatasetDescriptor, Format};
use lowkey::pipeline::{analyze_file, AnalysisOptions};

fn main() -> Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/synthetic/deficits.csv");
    let descriptor = DatasetDescriptor::new(path, Format::WeightedEdgeList);

    let count_options = AnalysisOptions {
        thresholds: vec![0.3, 0.5, 0.7],
        ..AnalysisOptions::default()
    };
    let mut volume_options = count_options.clone();
    volume_options.con_mode = ConMode::Weighted;
    volume_options.pagerank.weighted = true;

    for (name, options) in [("count", &count_options), ("volume", &volume_options)] {
        let (outcome, _) = analyze_file(&descriptor, options)?;
        let top = &outcome.report.records()[0];
        println!("{name} scoring: argmax {} with epsilon {:.6}", top.label, top.epsilon);
        for v in &outcome.verdicts {
            println!(
                "  threshold {:.1}: {}",
                v.threshold,
                if v.exists { "leader present" } else { "below the bar" }
            );
        }
    }
    Ok(())
}
