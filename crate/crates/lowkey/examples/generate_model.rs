//! Generate a directed ranking-model graph and inspect the planted
//! copy node.
//!
//!     cargo run --example generate_model -- --seed 7
//!
//! Nodes carry ranks; lower rank means a higher attachment probability
//! rank^(-alpha), so rank 1 soaks up in-edges. The final step picks a
//! random node and grafts the out-edges of the busiest attacker onto it.
//! That copy inherits reach without inheriting visibility, which is
//! exactly the low-key pattern.

use anyhow::{bail, Result};
use lowkey::ranking_model::{copy_node_analysis, generate, RankingModelParams};

fn main() -> Result<()> {
    let mut params = RankingModelParams::default();
    let mut args = std::env::args().skip(1);
    while let Some(flag) = args.next() {
        let value = args.next();
        match (flag.as_str(), value) {
            ("--seed", Some(v)) => params.seed = v.parse()?,
            ("--n", Some(v)) => params.n = v.parse()?,
            ("--alpha", Some(v)) => params.alpha = v.parse()?,
            (other, _) => bail!("unknown or valueless flag {other}"),
        }
    }

    let gg = generate(&params)?;
    let g = &gg.graph;
    println!(
        "n {} alpha {} seed {}: {} edges before the copy step, {} after",
        params.n,
        params.alpha,
        params.seed,
        gg.pre_copy.edge_count(),
        g.edge_count()
    );
    println!(
        "copy node {} (rank {}), template {} (rank {}, out-degree {})",
        g.label(gg.copy_node),
        gg.rank(gg.copy_node),
        g.label(gg.template_node),
        gg.rank(gg.template_node),
        g.out_degree(gg.template_node)
    );

    let analysis = copy_node_analysis(&gg);
    println!(
        "copy CON {} vs template CON {}; epsilon of copy {:.4}; low-key leader: {}",
        analysis.copy_con, analysis.template_con, analysis.epsilon_of_copy, analysis.copy_is_lkl
    );
    Ok(())
}
