//! Render the two comparison figures as standalone SVG files.
//!
//! The slope graph pairs each node's CON rank (left column) with its
//! PageRank rank (right column); a line that falls steeply from left to
//! right is a node that is influential but inconspicuous. The histogram
//! shows both normalized scores side by side per node.

use anyhow::Result;
use lowkey::ingest::{DatasetDescriptor, Format};
use lowkey::pipeline::{analyze_file, AnalysisOptions};
use lowkey::render::{render_histogram_svg, render_slope_svg};
use std::fs;

fn main() -> Result<()> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/synthetic/pack_a.matrix.csv"
    );
    let descriptor = DatasetDescriptor::new(path, Format::DominanceMatrix);
    let options = AnalysisOptions {
        movement_threshold: 3,
        ..AnalysisOptions::default()
    };
    let (outcome, _) = analyze_file(&descriptor, &options)?;

    let out_dir = std::env::temp_dir();
    let slope_path = out_dir.join("pack_a_slope.svg");
    fs::write(&slope_path, render_slope_svg(&outcome.slope))?;

    let histogram_path = out_dir.join("pack_a_histogram.svg");
    fs::write(&histogram_path, render_histogram_svg(&outcome.report, Some(12)))?;

    let movers = outcome
        .slope
        .rows
        .iter()
        .filter(|r| r.movement.unsigned_abs() as usize >= outcome.slope.movement_threshold)
        .count();
    println!(
        "{} of {} nodes move {} places or more between the rankings",
        movers,
        outcome.slope.rows.len(),
        outcome.slope.movement_threshold
    );
    println!("wrote {}", slope_path.display());
    println!("wrote {}", histogram_path.display());
    Ok(())
}
