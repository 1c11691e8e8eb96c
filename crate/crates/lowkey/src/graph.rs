//! Directed multigraph with strictly positive edge weights.
//!
//! Parallel edges are collapsed at insertion: adding an edge that already
//! exists accumulates its weight. Weights double as multiplicities for
//! count-valued data (dominance interactions) and as magnitudes for
//! real-valued data (trade volume, rating strength); the [`WeightKind`]
//! flag records which reading produced the graph.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Dense node handle, valid only for the graph that issued it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// What an edge weight means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightKind {
    /// Interaction counts; weights are positive integers.
    #[default]
    Count,
    /// Real-valued magnitudes such as trade volume.
    Volume,
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("self-loop rejected on node {0:?} ({1})")]
    SelfLoop(NodeId, String),
    #[error("edge weight must be positive and finite, got {0}")]
    BadWeight(f64),
    #[error("duplicate node label {0:?}")]
    DuplicateLabel(String),
}

/// Directed multigraph with collapsed weighted edges and no self-loops.
///
/// Node indices are dense (`0..n`) and assigned in insertion order, so every
/// downstream tie-break on index is reproducible from the input file alone.
/// Out- and in-adjacency are kept mutually consistent; both iterate targets
/// in ascending index order.
#[derive(Debug, Clone)]
pub struct MultiDigraph {
    labels: Vec<String>,
    by_label: HashMap<String, usize>,
    out: Vec<BTreeMap<usize, f64>>,
    inn: Vec<BTreeMap<usize, f64>>,
    kind: WeightKind,
}

/// A node's identity is its label; the index order is an encoding artifact
/// (serializing and re-reading a graph may re-number nodes), so equality
/// compares the label set and the labeled weighted edge set. The
/// [`WeightKind`] tag records how a file was read, not what the graph is,
/// so it does not participate either.
impl PartialEq for MultiDigraph {
    fn eq(&self, other: &Self) -> bool {
        if self.labels.len() != other.labels.len() {
            return false;
        }
        let sorted = |g: &MultiDigraph| -> Vec<String> {
            let mut v = g.labels.clone();
            v.sort_unstable();
            v
        };
        if sorted(self) != sorted(other) {
            return false;
        }
        let triples = |g: &MultiDigraph| -> BTreeMap<(String, String), f64> {
            g.edges()
                .map(|(u, v, w)| ((g.label(u).to_owned(), g.label(v).to_owned()), w))
                .collect()
        };
        triples(self) == triples(other)
    }
}

impl MultiDigraph {
    pub fn new(kind: WeightKind) -> Self {
        MultiDigraph {
            labels: Vec::new(),
            by_label: HashMap::new(),
            out: Vec::new(),
            inn: Vec::new(),
            kind,
        }
    }

    pub fn weight_kind(&self) -> WeightKind {
        self.kind
    }

    /// Returns the node with this label, creating it if absent.
    pub fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&i) = self.by_label.get(label) {
            return NodeId(i);
        }
        let i = self.labels.len();
        self.labels.push(label.to_owned());
        self.by_label.insert(label.to_owned(), i);
        self.out.push(BTreeMap::new());
        self.inn.push(BTreeMap::new());
        NodeId(i)
    }

    /// Adds a fresh node, erroring if the label is already taken.
    pub fn add_node(&mut self, label: &str) -> Result<NodeId, GraphError> {
        if self.by_label.contains_key(label) {
            return Err(GraphError::DuplicateLabel(label.to_owned()));
        }
        Ok(self.intern(label))
    }

    /// Accumulates `weight` onto the edge `u -> v`.
    ///
    /// Repeated insertions of the same pair collapse into one edge whose
    /// weight is the running sum.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId, weight: f64) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u, self.labels[u.0].clone()));
        }
        if weight <= 0.0 || !weight.is_finite() {
            return Err(GraphError::BadWeight(weight));
        }
        assert!(u.0 < self.labels.len() && v.0 < self.labels.len(), "node id out of range");
        *self.out[u.0].entry(v.0).or_insert(0.0) += weight;
        *self.inn[v.0].entry(u.0).or_insert(0.0) += weight;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of distinct (source, target) pairs.
    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|m| m.len()).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.out.iter().flat_map(|m| m.values()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.labels.len()).map(NodeId)
    }

    /// Panics if `u` is not a node of this graph.
    pub fn label(&self, u: NodeId) -> &str {
        &self.labels[u.0]
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.by_label.get(label).copied().map(NodeId)
    }

    /// Distinct out-targets of `u` with accumulated weights, ascending by index.
    ///
    /// Panics if `u` is not a node of this graph.
    pub fn out_neighbors(&self, u: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.out[u.0].iter().map(|(&v, &w)| (NodeId(v), w))
    }

    /// Panics if `v` is not a node of this graph.
    pub fn in_neighbors(&self, v: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.inn[v.0].iter().map(|(&u, &w)| (NodeId(u), w))
    }

    /// Number of distinct out-targets.
    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out[u.0].len()
    }

    /// Number of distinct in-sources.
    pub fn in_degree(&self, v: NodeId) -> usize {
        self.inn[v.0].len()
    }

    /// Total weight leaving `u`.
    pub fn out_weight(&self, u: NodeId) -> f64 {
        self.out[u.0].values().sum()
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<f64> {
        self.out[u.0].get(&v.0).copied()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.out[u.0].contains_key(&v.0)
    }

    /// Every edge `(u, v, w)` in ascending (source, target) order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, m)| m.iter().map(move |(&v, &w)| (NodeId(u), NodeId(v), w)))
    }

    /// Graph with every edge's orientation flipped; node set, labels and
    /// weights unchanged. An involution: `g.reverse().reverse() == g`.
    pub fn reverse(&self) -> MultiDigraph {
        MultiDigraph {
            labels: self.labels.clone(),
            by_label: self.by_label.clone(),
            out: self.inn.clone(),
            inn: self.out.clone(),
            kind: self.kind,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> (MultiDigraph, NodeId, NodeId, NodeId) {
        let mut g = MultiDigraph::new(WeightKind::Count);
        let a = g.intern("a");
        let b = g.intern("b");
        let c = g.intern("c");
        (g, a, b, c)
    }

    #[test]
    fn parallel_edges_accumulate() {
        let (mut g, a, b, _) = abc();
        g.add_edge(a, b, 1.0).unwrap();
        g.add_edge(a, b, 2.0).unwrap();
        assert_eq!(g.weight(a, b), Some(3.0));
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.total_weight(), 3.0);
    }

    #[test]
    fn self_loop_rejected() {
        let (mut g, a, _, _) = abc();
        assert_eq!(
            g.add_edge(a, a, 1.0),
            Err(GraphError::SelfLoop(a, "a".to_owned()))
        );
    }

    #[test]
    fn non_positive_weight_rejected() {
        let (mut g, a, b, _) = abc();
        assert_eq!(g.add_edge(a, b, 0.0), Err(GraphError::BadWeight(0.0)));
        assert_eq!(g.add_edge(a, b, -2.0), Err(GraphError::BadWeight(-2.0)));
        assert!(g.add_edge(a, b, f64::NAN).is_err());
    }

    #[test]
    fn degrees_update_on_insert() {
        let (mut g, a, b, _) = abc();
        g.add_edge(a, b, 1.0).unwrap();
        assert_eq!(g.out_degree(a), 1);
        assert_eq!(g.in_degree(b), 1);
        assert_eq!(g.out_degree(b), 0);
        assert_eq!(g.in_degree(a), 0);
    }

    #[test]
    fn intern_is_idempotent_add_node_is_not() {
        let mut g = MultiDigraph::new(WeightKind::Count);
        let a1 = g.intern("a");
        let a2 = g.intern("a");
        assert_eq!(a1, a2);
        assert_eq!(g.node_count(), 1);
        assert_eq!(
            g.add_node("a"),
            Err(GraphError::DuplicateLabel("a".to_owned()))
        );
    }

    #[test]
    fn reverse_flips_single_edge() {
        let (mut g, a, b, _) = abc();
        g.add_edge(a, b, 1.5).unwrap();
        let r = g.reverse();
        assert_eq!(r.weight(b, a), Some(1.5));
        assert_eq!(r.weight(a, b), None);
        assert_eq!(r.label(a), "a");
    }

    #[test]
    fn reverse_is_involution() {
        let (mut g, a, b, c) = abc();
        g.add_edge(a, b, 1.0).unwrap();
        g.add_edge(b, c, 2.0).unwrap();
        g.add_edge(c, a, 4.0).unwrap();
        g.add_edge(a, c, 8.0).unwrap();
        assert_eq!(g.reverse().reverse(), g);
        assert_eq!(g.reverse().total_weight(), g.total_weight());
        assert_eq!(g.reverse().node_count(), g.node_count());
    }

    #[test]
    fn reverse_of_empty_is_empty() {
        let g = MultiDigraph::new(WeightKind::Volume);
        let r = g.reverse();
        assert_eq!(r.node_count(), 0);
        assert_eq!(r.edge_count(), 0);
    }

    #[test]
    fn out_neighbors_after_reverse_are_former_in_neighbors() {
        let (mut g, a, b, c) = abc();
        g.add_edge(a, c, 1.0).unwrap();
        g.add_edge(b, c, 2.0).unwrap();
        let r = g.reverse();
        let outs: Vec<_> = r.out_neighbors(c).collect();
        assert_eq!(outs, vec![(a, 1.0), (b, 2.0)]);
    }

    #[test]
    fn degree_sums_match_edge_count() {
        let (mut g, a, b, c) = abc();
        g.add_edge(a, b, 1.0).unwrap();
        g.add_edge(a, c, 1.0).unwrap();
        g.add_edge(b, c, 3.0).unwrap();
        let out_sum: usize = g.nodes().map(|u| g.out_degree(u)).sum();
        let in_sum: usize = g.nodes().map(|u| g.in_degree(u)).sum();
        assert_eq!(out_sum, g.edge_count());
        assert_eq!(in_sum, g.edge_count());
    }

    #[test]
    fn edges_iterate_in_index_order() {
        let (mut g, a, b, c) = abc();
        g.add_edge(c, a, 1.0).unwrap();
        g.add_edge(a, c, 1.0).unwrap();
        g.add_edge(a, b, 1.0).unwrap();
        let pairs: Vec<_> = g.edges().map(|(u, v, _)| (u.0, v.0)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (2, 0)]);
    }
}
