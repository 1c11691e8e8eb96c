//! Rank-driven random digraph generator.
//!
//! Nodes carry ranks 1..n. Each ordered pair (u, v) independently gains an
//! edge with probability rank(v)^(-alpha), so low ranks attract in-edges
//! and the in-degree sequence follows an inverse power of rank. A final
//! copy step picks a uniformly random node and grafts the out-neighborhood
//! of the highest-out-degree node onto it, planting a node whose CON score
//! is large while its in-edges, and with them its visibility to a random
//! walk, stay untouched.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centrality::{
    con_scores, pagerank, ConMode, PageRankParams,
};
use crate::graph::{MultiDigraph, NodeId, WeightKind};
use crate::lkl::{detect_lkl, epsilon_scores};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankingModelParams {
    /// Node count, fixed for the whole generation.
    pub n: usize,
    /// Attachment strength in (0, 1). Smaller values flatten the rank bias.
    pub alpha: f64,
    pub seed: u64,
}

impl RankingModelParams {
    pub fn new(n: usize, alpha: f64, seed: u64) -> Result<Self, RankingModelError> {
        let p = RankingModelParams { n, alpha, seed };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), RankingModelError> {
        if self.n < 2 {
            return Err(RankingModelError::NodeCount(self.n));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(RankingModelError::Alpha(self.alpha));
        }
        Ok(())
    }
}

impl Default for RankingModelParams {
    fn default() -> Self {
        RankingModelParams {
            n: 200,
            alpha: 0.5,
            seed: 0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RankingModelError {
    #[error("node count must be at least 2, got {0}")]
    NodeCount(usize),
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    Alpha(f64),
}

/// A generated digraph plus the identities the copy step produced.
///
/// Node index i holds rank i + 1; which original node identity sits at each
/// rank is uniformly random and recorded in the label ("v7" means original
/// node 7). All downstream analysis uses indices, so the labeling only
/// matters when comparing runs.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedGraph {
    pub graph: MultiDigraph,
    /// The uniformly chosen node that received the grafted out-edges.
    pub copy_node: NodeId,
    /// The max-out-degree node it copied from (lowest index on ties).
    pub template_node: NodeId,
    /// The graph as it stood before the copy step.
    pub pre_copy: MultiDigraph,
    pub params: RankingModelParams,
}

impl GeneratedGraph {
    /// 1-based rank of a node; index order is rank order.
    pub fn rank(&self, u: NodeId) -> usize {
        u.index() + 1
    }
}

/// Runs the full generation: random labeling, rank-biased edges, copy step.
///
/// Deterministic for a given seed; the RNG (ChaCha8, a portable seedable
/// stream cipher) is consumed in a fixed order: the label permutation, then
/// the pair coin flips row by row with the diagonal skipped, then the copy
/// node choice.
pub fn generate(params: &RankingModelParams) -> Result<GeneratedGraph, RankingModelError> {
    params.validate()?;
    let n = params.n;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut originals: Vec<usize> = (1..=n).collect();
    originals.shuffle(&mut rng);

    let mut g = MultiDigraph::new(WeightKind::Count);
    for orig in &originals {
        g.intern(&format!("v{orig}"));
    }

    // p[j] = (rank of index j)^(-alpha); rank 1 gives probability exactly 1.
    let p: Vec<f64> = (1..=n).map(|rank| (rank as f64).powf(-params.alpha)).collect();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if rng.gen::<f64>() < p[j] {
                g.add_edge(NodeId(i), NodeId(j), 1.0).expect("i != j and weight 1");
            }
        }
    }
    let pre_copy = g.clone();

    let copy_node = NodeId(rng.gen_range(0..n));
    let template_node = g
        .nodes()
        .max_by(|&a, &b| {
            g.out_degree(a)
                .cmp(&g.out_degree(b))
                .then(b.index().cmp(&a.index()))
        })
        .expect("n >= 2");
    // Graft: ensure every out-edge of the template exists from the copy
    // node too. Already-present edges are left as they are and a would-be
    // self-loop (template -> copy) is skipped.
    let targets: Vec<NodeId> = g.out_neighbors(template_node).map(|(v, _)| v).collect();
    for j in targets {
        if j != copy_node && !g.has_edge(copy_node, j) {
            g.add_edge(copy_node, j, 1.0).expect("distinct nodes");
        }
    }

    Ok(GeneratedGraph {
        graph: g,
        copy_node,
        template_node,
        pre_copy,
        params: *params,
    })
}

/// Exact in-degree histogram with a small tail summary.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeHistogram {
    counts: BTreeMap<usize, usize>,
    pub max_degree: usize,
    pub mean: f64,
    pub stddev: f64,
    /// Fraction of nodes with in-degree above mean + 2 stddev.
    pub tail_fraction: f64,
}

impl DegreeHistogram {
    /// (degree, node count) pairs in ascending degree order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().map(|(&d, &c)| (d, c))
    }

    pub fn count_at(&self, degree: usize) -> usize {
        self.counts.get(&degree).copied().unwrap_or(0)
    }
}

pub fn in_degree_distribution(g: &MultiDigraph) -> DegreeHistogram {
    let degrees: Vec<usize> = g.nodes().map(|u| g.in_degree(u)).collect();
    let mut counts = BTreeMap::new();
    for &d in &degrees {
        *counts.entry(d).or_insert(0usize) += 1;
    }
    let n = degrees.len().max(1) as f64;
    let mean = degrees.iter().sum::<usize>() as f64 / n;
    let var = degrees.iter().map(|&d| (d as f64 - mean).powi(2)).sum::<f64>() / n;
    let stddev = var.sqrt();
    let cutoff = mean + 2.0 * stddev;
    let tail_fraction = degrees.iter().filter(|&&d| d as f64 > cutoff).count() as f64 / n;
    DegreeHistogram {
        counts,
        max_degree: degrees.iter().copied().max().unwrap_or(0),
        mean,
        stddev,
        tail_fraction,
    }
}

/// Outcome of running the detection pipeline on a generated graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CopyNodeAnalysis {
    pub copy_con: f64,
    pub template_con: f64,
    /// Copy node is in the argmax-ε set and ε_max exceeds 0.5.
    pub copy_is_lkl: bool,
    pub epsilon_of_copy: f64,
}

/// Scores a generated graph and checks whether the copy node came out as
/// the low-key leader.
///
/// Binarized CON, default PageRank parameters. The walk runs on the stored
/// orientation: generated edges already point toward the high-rank end
/// that accumulates them, so no reversal is applied here.
pub fn copy_node_analysis(gg: &GeneratedGraph) -> CopyNodeAnalysis {
    let con = con_scores(&gg.graph, ConMode::Binarized);
    let pr = pagerank(&gg.graph, &PageRankParams::default())
        .expect("generated graphs are non-empty and converge under defaults");
    let report = epsilon_scores(&gg.graph, &con, &pr).expect("matching node sets");
    let verdict = detect_lkl(&report, 0.5);
    let copy = gg.copy_node;
    let epsilon_of_copy = report
        .record(copy)
        .map(|r| r.epsilon)
        .expect("copy node is in the report");
    CopyNodeAnalysis {
        copy_con: con.get(copy),
        template_con: con.get(gg.template_node),
        copy_is_lkl: verdict.exists && verdict.leaders.iter().any(|l| l.index == copy.index()),
        epsilon_of_copy,
    }
}
