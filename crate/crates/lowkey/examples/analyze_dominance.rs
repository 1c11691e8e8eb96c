//! Score a dominance matrix and print the verdict.
//!
//! The bundled pack_a network has a textbook low-key leader: an animal
//! that shares victims with most of the pack but is almost never targeted
//! itself, so it sits high by CON and low by reversed-edge PageRank.

use anyhow::Result;
use lowkey::ingest::{DatasetDescriptor, Format};
use lowkey::pipeline::{analyze_file, AnalysisOptions};

fn main() -> Result<()> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/synthetic/pack_a.matrix.csv"
    );
    let descriptor = DatasetDescriptor::new(path, Format::DominanceMatrix);
    let options = AnalysisOptions::default();
    let (outcome, meta) = analyze_file(&descriptor, &options)?;

    println!(
        "{}: {} nodes, {} edges, total weight {}",
        meta.path, meta.nodes, meta.edges, meta.total_weight
    );
    println!();
    println!("{:<8} {:>5} {:>10} {:>9} {:>9} {:>9}", "node", "con", "pagerank", "con_n", "pr_n", "epsilon");
    for r in outcome.report.records().iter().take(8) {
        println!(
            "{:<8} {:>5} {:>10.6} {:>9.4} {:>9.4} {:>9.4}",
            r.label, r.con, r.pr, r.con_norm, r.pr_norm, r.epsilon
        );
    }
    println!("...");
    println!();

    let verdict = outcome.verdict();
    let names: Vec<&str> = verdict.leaders.iter().map(|l| l.label.as_str()).collect();
    if verdict.exists {
        println!(
            "low-key leader at threshold {}: {} (epsilon {:.6})",
            verdict.threshold,
            names.join(", "),
            verdict.epsilon_max
        );
    } else {
        println!(
            "no low-key leader at threshold {} (epsilon_max {:.6}, argmax {})",
            verdict.threshold,
            verdict.epsilon_max,
            names.join(", ")
        );
    }
    Ok(())
}
