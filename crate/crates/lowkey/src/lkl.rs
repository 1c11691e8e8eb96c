//! Low-key leader detection.
//!
//! Both centrality vectors are rescaled to [0, 1] by unity-based
//! normalization, and each node gets a strength ε = con_norm - pr_norm.
//! A node is a low-key leader when it attains the maximum ε and that
//! maximum clears the threshold (strictly). High ε means the node scores
//! near the top by CON while staying near the bottom by PageRank: an
//! influential actor the walk barely notices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centrality::{ConMode, ConScoreVector, PageRankVector};
use crate::graph::{MultiDigraph, NodeId};

#[derive(Debug, Error)]
pub enum LklError {
    #[error("empty input")]
    Empty,
    #[error("node set mismatch: graph has {nodes} nodes, CON vector {con}, PageRank vector {pr}")]
    Mismatch { nodes: usize, con: usize, pr: usize },
}

/// Unity-based normalization: x -> (x - min) / (max - min).
///
/// Returns the scaled values and a degeneracy flag. An all-equal input has
/// no spread to scale by; every output is 0 and the flag is set, so callers
/// can warn instead of dividing by zero or erroring out mid-analysis.
///
/// Positive affine rescaling of the input cancels out of the formula, so
/// downstream detection sees the same normalized values; with rescaling
/// that is exact in f64 (integer slope and offset on integer scores) the
/// outputs are bit-identical, otherwise equal up to rounding.
pub fn normalize(values: &[f64]) -> Result<(Vec<f64>, bool), LklError> {
    if values.is_empty() {
        return Err(LklError::Empty);
    }
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == min {
        return Ok((vec![0.0; values.len()], true));
    }
    let span = max - min;
    Ok((values.iter().map(|&x| (x - min) / span).collect(), false))
}

/// One node's scores, raw and normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub index: usize,
    pub label: String,
    pub con: f64,
    pub pr: f64,
    pub con_norm: f64,
    pub pr_norm: f64,
    pub epsilon: f64,
}

impl NodeRecord {
    pub fn node(&self) -> NodeId {
        NodeId(self.index)
    }
}

/// Full per-node analysis, sorted by ε descending (ties by node index).
///
/// Non-empty by construction: [`epsilon_scores`] rejects empty inputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityReport {
    records: Vec<NodeRecord>,
    pub con_mode: ConMode,
    pub damping: f64,
    pub iterations: usize,
    pub residual: f64,
    /// All CON scores were equal; con_norm is identically 0.
    pub con_degenerate: bool,
    /// All PageRank values were equal; pr_norm is identically 0.
    pub pr_degenerate: bool,
}

impl CentralityReport {
    /// Records in ε-descending order.
    pub fn records(&self) -> &[NodeRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The record of a specific node.
    pub fn record(&self, u: NodeId) -> Option<&NodeRecord> {
        self.records.iter().find(|r| r.index == u.index())
    }
}

/// Normalizes both score vectors and assembles the per-node ε report.
pub fn epsilon_scores(
    g: &MultiDigraph,
    con: &ConScoreVector,
    pr: &PageRankVector,
) -> Result<CentralityReport, LklError> {
    let n = g.node_count();
    if n == 0 {
        return Err(LklError::Empty);
    }
    if con.len() != n || pr.len() != n {
        return Err(LklError::Mismatch {
            nodes: n,
            con: con.len(),
            pr: pr.len(),
        });
    }
    let (con_norm, con_degenerate) = normalize(con.values())?;
    let (pr_norm, pr_degenerate) = normalize(pr.values())?;
    let mut records: Vec<NodeRecord> = g
        .nodes()
        .map(|u| {
            let i = u.index();
            NodeRecord {
                index: i,
                label: g.label(u).to_owned(),
                con: con.get(u),
                pr: pr.get(u),
                con_norm: con_norm[i],
                pr_norm: pr_norm[i],
                epsilon: con_norm[i] - pr_norm[i],
            }
        })
        .collect();
    records.sort_by(|a, b| {
        b.epsilon
            .partial_cmp(&a.epsilon)
            .expect("epsilon is never NaN")
            .then(a.index.cmp(&b.index))
    });
    Ok(CentralityReport {
        records,
        con_mode: con.mode(),
        damping: pr.damping,
        iterations: pr.iterations,
        residual: pr.residual,
        con_degenerate,
        pr_degenerate,
    })
}

/// The argmax-ε set and whether it clears the threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LklVerdict {
    /// Every node attaining the maximum ε, ascending by index.
    pub leaders: Vec<Leader>,
    pub epsilon_max: f64,
    pub threshold: f64,
    /// epsilon_max > threshold, strictly.
    pub exists: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leader {
    pub index: usize,
    pub label: String,
}

/// Finds the argmax-ε nodes and applies the strict threshold rule.
///
/// Panics if `threshold` is outside [0, 1].
pub fn detect_lkl(report: &CentralityReport, threshold: f64) -> LklVerdict {
    assert!(
        (0.0..=1.0).contains(&threshold),
        "threshold must lie in [0, 1], got {threshold}"
    );
    let records = report.records();
    let epsilon_max = records[0].epsilon;
    let mut leaders: Vec<Leader> = records
        .iter()
        .filter(|r| r.epsilon == epsilon_max)
        .map(|r| Leader {
            index: r.index,
            label: r.label.clone(),
        })
        .collect();
    leaders.sort_by_key(|l| l.index);
    LklVerdict {
        leaders,
        epsilon_max,
        threshold,
        exists: epsilon_max > threshold,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MovementClass {
    Neutral,
    /// CON rank at least `movement_threshold` places above the PageRank rank.
    ConUp,
    /// PageRank rank at least `movement_threshold` places above the CON rank.
    PrUp,
}

/// One node's position in both rankings. Ranks are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeRow {
    pub index: usize,
    pub label: String,
    pub con_rank: usize,
    pub pr_rank: usize,
    /// pr_rank - con_rank: positive when the node stands higher by CON.
    pub movement: i64,
    pub class: MovementClass,
}

/// Paired CON/PageRank rankings with movement classes, ready to render.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeGraphSpec {
    /// Rows in CON-rank order (the left column, top to bottom).
    pub rows: Vec<SlopeRow>,
    pub movement_threshold: usize,
}

/// Ranks every node by raw CON and by raw PageRank (descending, ties by
/// node index ascending) and classifies the movement between the two.
///
/// Panics if `movement_threshold` is zero.
pub fn slope_graph(report: &CentralityReport, movement_threshold: usize) -> SlopeGraphSpec {
    assert!(movement_threshold >= 1, "movement threshold must be at least 1");
    let records = report.records();
    let rank_by = |key: fn(&NodeRecord) -> f64| -> Vec<usize> {
        let mut order: Vec<usize> = (0..records.len()).collect();
        order.sort_by(|&i, &j| {
            key(&records[j])
                .partial_cmp(&key(&records[i]))
                .expect("scores are never NaN")
                .then(records[i].index.cmp(&records[j].index))
        });
        // rank[record position] = 1-based rank
        let mut rank = vec![0; records.len()];
        for (r, &pos) in order.iter().enumerate() {
            rank[pos] = r + 1;
        }
        rank
    };
    let con_rank = rank_by(|r| r.con);
    let pr_rank = rank_by(|r| r.pr);
    let mut rows: Vec<SlopeRow> = records
        .iter()
        .enumerate()
        .map(|(pos, r)| {
            let movement = pr_rank[pos] as i64 - con_rank[pos] as i64;
            let t = movement_threshold as i64;
            let class = if movement >= t {
                MovementClass::ConUp
            } else if movement <= -t {
                MovementClass::PrUp
            } else {
                MovementClass::Neutral
            };
            SlopeRow {
                index: r.index,
                label: r.label.clone(),
                con_rank: con_rank[pos],
                pr_rank: pr_rank[pos],
                movement,
                class,
            }
        })
        .collect();
    rows.sort_by_key(|r| r.con_rank);
    SlopeGraphSpec {
        rows,
        movement_threshold,
    }
}

/// Aggregate over many networks: how many contain a low-key leader.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchSummary {
    pub total: usize,
    pub count_with_lkl: usize,
    pub fraction: f64,
    pub threshold: f64,
    /// Verdicts in input order.
    pub verdicts: Vec<LklVerdict>,
}

/// Applies [`detect_lkl`] to every report and tallies the hits.
pub fn batch_lkl(reports: &[CentralityReport], threshold: f64) -> Result<BatchSummary, LklError> {
    if reports.is_empty() {
        return Err(LklError::Empty);
    }
    let verdicts: Vec<LklVerdict> = reports.iter().map(|r| detect_lkl(r, threshold)).collect();
    let count_with_lkl = verdicts.iter().filter(|v| v.exists).count();
    Ok(BatchSummary {
        total: reports.len(),
        count_with_lkl,
        fraction: count_with_lkl as f64 / reports.len() as f64,
        threshold,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::{con_scores, pagerank_reversed, PageRankParams};
    use crate::graph::WeightKind;

    fn report_for(edges: &[(&str, &str, f64)]) -> (MultiDigraph, CentralityReport) {
        let mut g = MultiDigraph::new(WeightKind::Count);
        for &(u, v, w) in edges {
            let a = g.intern(u);
            let b = g.intern(v);
            g.add_edge(a, b, w).unwrap();
        }
        let con = con_scores(&g, ConMode::Binarized);
        let pr = pagerank_reversed(&g, &PageRankParams::default()).unwrap();
        let rep = epsilon_scores(&g, &con, &pr).unwrap();
        (g, rep)
    }

    #[test]
    fn normalize_basic() {
        let (v, degenerate) = normalize(&[5.0, 10.0, 15.0]).unwrap();
        assert_eq!(v, vec![0.0, 0.5, 1.0]);
        assert!(!degenerate);
    }

    #[test]
    fn normalize_degenerate_all_equal() {
        let (v, degenerate) = normalize(&[7.0, 7.0, 7.0]).unwrap();
        assert_eq!(v, vec![0.0, 0.0, 0.0]);
        assert!(degenerate);
    }

    #[test]
    fn normalize_unit_range_is_identity() {
        let (v, degenerate) = normalize(&[0.0, 1.0]).unwrap();
        assert_eq!(v, vec![0.0, 1.0]);
        assert!(!degenerate);
    }

    #[test]
    fn normalize_empty_errors() {
        assert!(matches!(normalize(&[]), Err(LklError::Empty)));
    }

    #[test]
    fn epsilon_is_exactly_norm_difference_and_sorted() {
        let (_, rep) = report_for(&[
            ("a", "c", 1.0),
            ("b", "c", 1.0),
            ("d", "c", 1.0),
            ("c", "a", 1.0),
        ]);
        for r in rep.records() {
            assert_eq!(r.epsilon, r.con_norm - r.pr_norm);
            assert!((-1.0..=1.0).contains(&r.epsilon));
        }
        for pair in rep.records().windows(2) {
            assert!(pair[0].epsilon >= pair[1].epsilon);
        }
    }

    #[test]
    fn epsilon_mismatched_inputs_error() {
        let (g, _) = report_for(&[("a", "b", 1.0)]);
        let mut bigger = MultiDigraph::new(WeightKind::Count);
        for l in ["a", "b", "c"] {
            bigger.intern(l);
        }
        let con3 = con_scores(&bigger, ConMode::Binarized);
        let pr2 = pagerank_reversed(&g, &PageRankParams::default()).unwrap();
        assert!(matches!(
            epsilon_scores(&g, &con3, &pr2),
            Err(LklError::Mismatch { .. })
        ));
    }

    #[test]
    fn double_degenerate_two_node_graph() {
        // a <-> b: both nodes have CON 0 and PageRank 1/2.
        let (_, rep) = report_for(&[("a", "b", 1.0), ("b", "a", 1.0)]);
        assert!(rep.con_degenerate);
        assert!(rep.pr_degenerate);
        assert!(rep.records().iter().all(|r| r.epsilon == 0.0));
        let verdict = detect_lkl(&rep, 0.5);
        assert!(!verdict.exists);
        assert_eq!(verdict.leaders.len(), 2);
        assert_eq!(verdict.epsilon_max, 0.0);
    }

    #[test]
    fn detect_lkl_threshold_is_strict() {
        let (_, rep) = report_for(&[
            ("a", "c", 1.0),
            ("b", "c", 1.0),
            ("d", "c", 1.0),
            ("c", "a", 1.0),
        ]);
        let eps = rep.records()[0].epsilon;
        let below = detect_lkl(&rep, eps);
        assert!(!below.exists, "at threshold == max the verdict must be negative");
        let above = detect_lkl(&rep, eps - 1e-9);
        assert!(above.exists);
        assert_eq!(below.leaders, above.leaders);
    }

    #[test]
    fn detect_lkl_reports_all_tied_leaders() {
        // Three attackers of the same victim are fully symmetric except
        // that c snaps back at a; mass from c spreads over all three, so
        // a, b and e tie at both the CON maximum and the PageRank minimum.
        let (_, rep) = report_for(&[
            ("a", "c", 1.0),
            ("b", "c", 1.0),
            ("e", "c", 1.0),
            ("c", "a", 1.0),
        ]);
        let verdict = detect_lkl(&rep, 0.5);
        assert!(verdict.exists, "epsilon_max should be 1 here");
        let labels: Vec<&str> = verdict.leaders.iter().map(|l| l.label.as_str()).collect();
        assert_eq!(labels, vec!["a", "b", "e"]);
        let indices: Vec<usize> = verdict.leaders.iter().map(|l| l.index).collect();
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        assert_eq!(indices, sorted);
    }

    #[test]
    fn slope_ranks_are_permutations_and_movement_sums_to_zero() {
        let (_, rep) = report_for(&[
            ("a", "c", 1.0),
            ("b", "c", 2.0),
            ("d", "c", 1.0),
            ("c", "b", 1.0),
            ("d", "a", 3.0),
        ]);
        let spec = slope_graph(&rep, 2);
        let n = spec.rows.len();
        let mut con_ranks: Vec<usize> = spec.rows.iter().map(|r| r.con_rank).collect();
        let mut pr_ranks: Vec<usize> = spec.rows.iter().map(|r| r.pr_rank).collect();
        con_ranks.sort_unstable();
        pr_ranks.sort_unstable();
        assert_eq!(con_ranks, (1..=n).collect::<Vec<_>>());
        assert_eq!(pr_ranks, (1..=n).collect::<Vec<_>>());
        assert_eq!(spec.rows.iter().map(|r| r.movement).sum::<i64>(), 0);
    }

    #[test]
    fn slope_classes_follow_threshold_rule() {
        let rows = [
            (1usize, 8usize, 5usize, MovementClass::ConUp),
            (3, 3, 5, MovementClass::Neutral),
            (12, 1, 10, MovementClass::PrUp),
            (4, 8, 5, MovementClass::Neutral),
        ];
        for (con_rank, pr_rank, t, expected) in rows {
            let movement = pr_rank as i64 - con_rank as i64;
            let class = if movement >= t as i64 {
                MovementClass::ConUp
            } else if movement <= -(t as i64) {
                MovementClass::PrUp
            } else {
                MovementClass::Neutral
            };
            assert_eq!(class, expected, "con {con_rank} pr {pr_rank} threshold {t}");
        }
        // End-to-end: s tops CON by hitting both contested victims, but
        // each victim's reversed-walk mass splits four ways, while every
        // hunter also owns an exclusive victim whose mass arrives whole.
        // That leaves s first by CON and seventh by PageRank.
        let mut edges = vec![("s", "w1", 1.0), ("s", "w2", 1.0)];
        let hunters = ["h1", "h2", "h3", "h4", "h5", "h6"];
        let dens = ["x1", "x2", "x3", "x4", "x5", "x6"];
        for (i, (&h, &x)) in hunters.iter().zip(&dens).enumerate() {
            edges.push((h, if i < 3 { "w1" } else { "w2" }, 1.0));
            edges.push((h, x, 1.0));
        }
        let (g, rep) = report_for(&edges);
        let spec = slope_graph(&rep, 5);
        let s = g.node_by_label("s").unwrap();
        let row = spec.rows.iter().find(|r| r.index == s.index()).unwrap();
        assert_eq!(row.con_rank, 1);
        assert_eq!(row.movement, 6);
        assert_eq!(row.class, MovementClass::ConUp);
    }

    #[test]
    fn batch_counts_and_fraction() {
        let (_, rep_with) = report_for(&[
            ("a", "c", 1.0),
            ("b", "c", 1.0),
            ("d", "c", 1.0),
            ("c", "a", 1.0),
        ]);
        let (_, rep_without) = report_for(&[("a", "b", 1.0), ("b", "a", 1.0)]);
        let summary = batch_lkl(&[rep_with.clone(), rep_without], 0.5).unwrap();
        assert_eq!(summary.total, 2);
        assert_eq!(summary.count_with_lkl, 1);
        assert_eq!(summary.fraction, 0.5);
        let single = batch_lkl(&[rep_with], 0.5).unwrap();
        assert_eq!(single.fraction, 1.0);
        assert!(batch_lkl(&[], 0.5).is_err());
    }

    #[test]
    fn batch_fraction_monotone_in_threshold() {
        let reports: Vec<CentralityReport> = [
            &[("a", "c", 1.0), ("b", "c", 1.0), ("d", "c", 1.0), ("c", "a", 1.0)][..],
            &[("a", "b", 1.0), ("b", "a", 1.0)][..],
            &[("x", "z", 1.0), ("y", "z", 1.0), ("z", "y", 1.0)][..],
        ]
        .iter()
        .map(|edges| report_for(edges).1)
        .collect();
        let mut last = f64::INFINITY;
        for t in [0.0, 0.2, 0.4, 0.5, 0.7, 0.9, 1.0] {
            let f = batch_lkl(&reports, t).unwrap().fraction;
            assert!(f <= last);
            last = f;
        }
    }
}
