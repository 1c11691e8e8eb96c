//! Low-key leader detection for adversarial directed networks.
//!
//! In a network whose edges record attacks, dominance, or distrust, the
//! loudest node is rarely the whole story. This crate contrasts two views
//! of every node: its CON score (how many targets it shares with the rest
//! of the population) and its PageRank on the reversed-edge graph. A node
//! that sits near the top of the first ranking and near the bottom of the
//! second is a low-key leader: broadly engaged, barely visible. The gap
//! between its normalized scores, ε ∈ [-1, 1], measures how pronounced the
//! contrast is.
//!
//! The crate is organized around runnable examples; each one demonstrates
//! a single capability end to end on the bundled synthetic datasets:
//!
//! ```text
//! examples/
//! ├── analyze_dominance.rs    # dominance matrix -> scores, ε, verdict
//! ├── signed_ratings.rs       # negative-rating edge list -> leader
//! ├── trade_volumes.rs        # weighted flows, threshold sensitivity
//! ├── batch_directory.rs      # LKL prevalence across a whole directory
//! ├── generate_model.rs       # synthetic digraphs with a planted leader
//! ├── degree_distribution.rs  # in-degree law of the generator
//! └── slope_graph_svg.rs      # ranking-comparison figures as SVG
//! ```
//!
//! ```bash
//! cargo run --example analyze_dominance
//! cargo run --example generate_model -- --seed 7
//! ```
//!
//! The same pipeline ships as a thin CLI named `lowkey` with subcommands
//! `analyze`, `batch`, `generate`, and `render`.
//!
//! # Quick start
//!
//! ```
//! use lowkey::graph::{MultiDigraph, WeightKind};
//! use lowkey::pipeline::{analyze_graph, AnalysisOptions};
//!
//! // Three rivals harass the same target; the target snaps back at one.
//! let mut g = MultiDigraph::new(WeightKind::Count);
//! let (a, b, c, d) = (g.intern("a"), g.intern("b"), g.intern("c"), g.intern("d"));
//! for u in [a, b, d] {
//!     g.add_edge(u, c, 1.0).unwrap();
//! }
//! g.add_edge(c, a, 1.0).unwrap();
//!
//! let outcome = analyze_graph(&g, &AnalysisOptions::default()).unwrap();
//! let top = &outcome.report.records()[0];
//! assert_eq!(outcome.report.len(), 4);
//! assert!(top.epsilon >= outcome.report.records()[1].epsilon);
//! ```
//!
//! Pieces can be used on their own: [`centrality`] for the raw scores,
//! [`lkl`] for normalization and verdicts, [`ranking_model`] for the
//! generator, [`ingest`] for the file formats, [`render`] for figures.

pub mod centrality;
pub mod graph;
pub mod ingest;
pub mod lkl;
pub mod pipeline;
pub mod ranking_model;
pub mod render;

pub use centrality::{ConMode, Orientation, PageRankParams};
pub use graph::{MultiDigraph, NodeId, WeightKind};
pub use ingest::{DatasetDescriptor, DirectionConvention, Format};
pub use lkl::{CentralityReport, LklVerdict};
pub use pipeline::{analyze_file, analyze_graph, AnalysisOptions};
pub use ranking_model::{generate, RankingModelParams};
