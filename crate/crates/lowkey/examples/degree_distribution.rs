//! Check the generator's in-degree law empirically.
//!
//! A node holding rank i is targeted by each of the other n-1 nodes with
//! probability i^(-alpha), so its expected in-degree is (n-1) * i^(-alpha).
//! Averaging over seeds should land near that curve; the histogram shows
//! the heavy tail that a power law produces.

use anyhow::Result;
use lowkey::ranking_model::{generate, in_degree_distribution, RankingModelParams};

const RUNS: u64 = 50;

fn main() -> Result<()> {
    let (n, alpha) = (200usize, 0.5f64);
    let probe_ranks = [1usize, 4, 25, 100, 196];
    let mut sums = [0f64; 5];

    for seed in 0..RUNS {
        let gg = generate(&RankingModelParams::new(n, alpha, seed)?)?;
        for (slot, &rank) in probe_ranks.iter().enumerate() {
            let node = gg
                .graph
                .nodes()
                .find(|&u| gg.rank(u) == rank)
                .expect("every rank in 1..=n is assigned to exactly one node");
            sums[slot] += gg.pre_copy.in_degree(node) as f64;
        }
    }

    println!("mean in-degree by rank over {RUNS} seeds (n {n}, alpha {alpha}):");
    println!("{:>6} {:>10} {:>10}", "rank", "observed", "expected");
    for (slot, &rank) in probe_ranks.iter().enumerate() {
        let expected = (n - 1) as f64 * (rank as f64).powf(-alpha);
        println!("{:>6} {:>10.2} {:>10.2}", rank, sums[slot] / RUNS as f64, expected);
    }

    // One concrete histogram, coarsely bucketed.
    let gg = generate(&RankingModelParams::new(n, alpha, 0)?)?;
    let hist = in_degree_distribution(&gg.graph);
    println!();
    println!(
        "seed 0: mean {:.2}, stddev {:.2}, max {}, fraction beyond mean+2sd {:.3}",
        hist.mean, hist.stddev, hist.max_degree, hist.tail_fraction
    );
    let mut buckets = std::collections::BTreeMap::new();
    for (degree, count) in hist.entries() {
        *buckets.entry(degree / 10).or_insert(0usize) += count;
    }
    for (bucket, count) in buckets {
        // One mark per two nodes keeps the tallest bar on one line.
        println!(
            "  in-degree {:>3}-{:<3} {}",
            bucket * 10,
            bucket * 10 + 9,
            "#".repeat(count.div_ceil(2))
        );
    }
    Ok(())
}
