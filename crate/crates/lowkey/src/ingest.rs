//! File formats.
//!
//! Three input families, one interchange output:
//!
//! * dominance matrices: square CSV, header row of labels, integer counts;
//! * signed edge lists: `SOURCE,TARGET,RATING[,TIME]` rows where only
//!   negative ratings define edges (weight = |rating|);
//! * weighted edge lists: `source,target,weight` rows, the canonical form
//!   that [`serialize`] emits.
//!
//! All readers accept UTF-8 text with comma or tab delimiters (sniffed),
//! skip blank lines and `#` comments, and assign node indices in first-seen
//! order so downstream tie-breaks depend only on the input bytes.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{MultiDigraph, WeightKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    DominanceMatrix,
    SignedEdgeList,
    #[default]
    WeightedEdgeList,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::DominanceMatrix => "dominance-matrix",
            Format::SignedEdgeList => "signed-edge-list",
            Format::WeightedEdgeList => "weighted-edge-list",
        })
    }
}

/// Which way a dominance matrix reads.
///
/// Under the default, entry (row r, column c) counts how often c dominated
/// r, so a positive entry becomes the edge c -> r: the dominator points at
/// the dominated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionConvention {
    #[default]
    ColumnDominatesRow,
    RowDominatesColumn,
}

/// Row filter for signed edge lists. Adversarial analysis keeps only the
/// negative interactions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignFilter {
    #[default]
    NegativeOnly,
}

/// Everything needed to load one input file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetDescriptor {
    pub path: PathBuf,
    pub format: Format,
    pub direction: DirectionConvention,
    pub sign_filter: SignFilter,
}

impl DatasetDescriptor {
    pub fn new(path: impl Into<PathBuf>, format: Format) -> Self {
        DatasetDescriptor {
            path: path.into(),
            format,
            direction: DirectionConvention::default(),
            sign_filter: SignFilter::default(),
        }
    }
}

/// Guesses the format from the file name alone.
///
/// `*.matrix.*` (or a bare `.matrix` suffix) reads as a dominance matrix,
/// `*.signed.*` / `*.ratings.*` as a signed edge list, and any other
/// `.csv`/`.tsv`/`.edges` file as a weighted edge list. Returns `None` for
/// anything else so callers can demand an explicit format flag.
pub fn detect_format(path: &std::path::Path) -> Option<Format> {
    let name = path.file_name()?.to_str()?.to_ascii_lowercase();
    if name.contains(".matrix.") || name.ends_with(".matrix") {
        return Some(Format::DominanceMatrix);
    }
    if name.contains(".signed.")
        || name.ends_with(".signed")
        || name.contains(".ratings.")
        || name.ends_with(".ratings")
    {
        return Some(Format::SignedEdgeList);
    }
    if name.ends_with(".csv") || name.ends_with(".tsv") || name.ends_with(".edges") {
        return Some(Format::WeightedEdgeList);
    }
    None
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("no data rows")]
    Empty,
    #[error("matrix is not square: {labels} labels in the header, {rows} data rows")]
    NotSquare { labels: usize, rows: usize },
    #[error("line {line}: expected {expected} fields, got {got}")]
    FieldCount {
        line: u64,
        expected: String,
        got: usize,
    },
    #[error("line {line}, column {col}: cannot parse {text:?} as a number")]
    BadNumber { line: u64, col: usize, text: String },
    #[error("line {line}, column {col}: negative entry {value} in a dominance matrix")]
    NegativeCell { line: u64, col: usize, value: f64 },
    #[error("line {line}: duplicate node label {label:?}")]
    DuplicateLabel { line: u64, label: String },
    #[error("line {line}: row label {found:?} does not match header label {expected:?}")]
    RowLabelMismatch {
        line: u64,
        expected: String,
        found: String,
    },
    #[error("line {line}: rating {value} outside [-10, 10]")]
    RatingOutOfRange { line: u64, value: f64 },
    #[error("line {line}: edge weight must be positive, got {value}")]
    NonPositiveWeight { line: u64, value: f64 },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
}

/// Records with their 1-based line numbers, comments and blanks dropped.
fn records(text: &str) -> Result<Vec<(u64, Vec<String>)>, ParseError> {
    // Sniff the delimiter from the first line that carries content.
    let delimiter = text
        .lines()
        .find(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|l| if l.contains('\t') { b'\t' } else { b',' })
        .unwrap_or(b',');
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        out.push((line, record.iter().map(str::to_owned).collect()));
    }
    Ok(out)
}

fn parse_cell(line: u64, col: usize, text: &str) -> Result<f64, ParseError> {
    text.trim().parse::<f64>().map_err(|_| ParseError::BadNumber {
        line,
        col,
        text: text.to_owned(),
    })
}

/// Reads a square dominance matrix into a graph.
///
/// The header row lists the labels (its first cell is an ignored corner);
/// each data row is a label followed by one non-negative count per label.
/// Positive diagonal entries are dropped with a warning since self-directed
/// aggression carries no information here.
pub fn parse_dominance_matrix(
    text: &str,
    convention: DirectionConvention,
) -> Result<MultiDigraph, ParseError> {
    let rows = records(text)?;
    let Some(((header_line, header), data)) = rows.split_first().map(|(h, d)| (h.clone(), d))
    else {
        return Err(ParseError::Empty);
    };
    if header.len() < 2 {
        return Err(ParseError::FieldCount {
            line: header_line,
            expected: "a corner cell plus at least one label".to_owned(),
            got: header.len(),
        });
    }
    let labels = &header[1..];
    let n = labels.len();
    if data.len() != n {
        return Err(ParseError::NotSquare {
            labels: n,
            rows: data.len(),
        });
    }
    let mut g = MultiDigraph::new(WeightKind::Count);
    for label in labels {
        g.add_node(label).map_err(|_| ParseError::DuplicateLabel {
            line: header_line,
            label: label.clone(),
        })?;
    }
    for (r, (line, row)) in data.iter().enumerate() {
        if row.len() != n + 1 {
            return Err(ParseError::FieldCount {
                line: *line,
                expected: format!("{} (label plus {n} entries)", n + 1),
                got: row.len(),
            });
        }
        if row[0] != labels[r] {
            return Err(ParseError::RowLabelMismatch {
                line: *line,
                expected: labels[r].clone(),
                found: row[0].clone(),
            });
        }
        for (c, cell) in row[1..].iter().enumerate() {
            let value = parse_cell(*line, c + 2, cell)?;
            if value < 0.0 {
                return Err(ParseError::NegativeCell {
                    line: *line,
                    col: c + 2,
                    value,
                });
            }
            if value == 0.0 {
                continue;
            }
            if r == c {
                log::warn!(
                    "dominance matrix: ignoring diagonal entry {value} for {:?} (line {line})",
                    labels[r]
                );
                continue;
            }
            let (row_node, col_node) = (
                g.node_by_label(&labels[r]).expect("added above"),
                g.node_by_label(&labels[c]).expect("added above"),
            );
            let (from, to) = match convention {
                DirectionConvention::ColumnDominatesRow => (col_node, row_node),
                DirectionConvention::RowDominatesColumn => (row_node, col_node),
            };
            g.add_edge(from, to, value).expect("distinct nodes, positive weight");
        }
    }
    Ok(g)
}

fn is_header(row: &[String], names: &[&str]) -> bool {
    row.len() == names.len()
        && row
            .iter()
            .zip(names)
            .all(|(f, n)| f.eq_ignore_ascii_case(n))
}

/// Reads `SOURCE,TARGET,RATING[,TIME]` rows, keeping only the negative
/// ratings as edges of weight |rating|.
///
/// Ratings must lie in [-10, 10]. Rows rating oneself are skipped with a
/// warning. Nodes enter the graph only through kept rows, so users that
/// appear solely in positive rows are absent from the result.
pub fn parse_signed_edge_list(
    text: &str,
    _sign_filter: SignFilter,
) -> Result<MultiDigraph, ParseError> {
    let mut g = MultiDigraph::new(WeightKind::Volume);
    let rows = records(text)?;
    for (pos, (line, row)) in rows.iter().enumerate() {
        if pos == 0 && (is_header(row, &["source", "target", "rating", "time"])
            || is_header(row, &["source", "target", "rating"]))
        {
            continue;
        }
        if row.len() != 3 && row.len() != 4 {
            return Err(ParseError::FieldCount {
                line: *line,
                expected: "3 or 4 (SOURCE,TARGET,RATING[,TIME])".to_owned(),
                got: row.len(),
            });
        }
        let rating = parse_cell(*line, 3, &row[2])?;
        if !(-10.0..=10.0).contains(&rating) {
            return Err(ParseError::RatingOutOfRange {
                line: *line,
                value: rating,
            });
        }
        if rating >= 0.0 {
            continue;
        }
        if row[0] == row[1] {
            log::warn!("signed edge list: ignoring self-rating by {:?} (line {line})", row[0]);
            continue;
        }
        let u = g.intern(&row[0]);
        let v = g.intern(&row[1]);
        g.add_edge(u, v, rating.abs()).expect("distinct nodes, positive weight");
    }
    Ok(g)
}

/// Reads `source,target,weight` rows with positive weights, accumulating
/// repeated pairs. An optional literal header row is skipped.
pub fn parse_weighted_edge_list(text: &str) -> Result<MultiDigraph, ParseError> {
    let mut g = MultiDigraph::new(WeightKind::Volume);
    let rows = records(text)?;
    for (pos, (line, row)) in rows.iter().enumerate() {
        if pos == 0 && is_header(row, &["source", "target", "weight"]) {
            continue;
        }
        if row.len() != 3 {
            return Err(ParseError::FieldCount {
                line: *line,
                expected: "3 (source,target,weight)".to_owned(),
                got: row.len(),
            });
        }
        let weight = parse_cell(*line, 3, &row[2])?;
        if weight <= 0.0 || !weight.is_finite() {
            return Err(ParseError::NonPositiveWeight {
                line: *line,
                value: weight,
            });
        }
        if row[0] == row[1] {
            log::warn!("weighted edge list: ignoring self-edge on {:?} (line {line})", row[0]);
            continue;
        }
        let u = g.intern(&row[0]);
        let v = g.intern(&row[1]);
        g.add_edge(u, v, weight).expect("distinct nodes, positive weight");
    }
    Ok(g)
}

/// Dispatches to the right parser for a descriptor.
pub fn parse_dataset(d: &DatasetDescriptor, text: &str) -> Result<MultiDigraph, ParseError> {
    match d.format {
        Format::DominanceMatrix => parse_dominance_matrix(text, d.direction),
        Format::SignedEdgeList => parse_signed_edge_list(text, d.sign_filter),
        Format::WeightedEdgeList => parse_weighted_edge_list(text),
    }
}

/// Writes the canonical weighted edge list: a `source,target,weight` header
/// and one row per edge, sorted by (source index, target index).
///
/// Weights print in shortest round-trip form, so integer-valued weights
/// carry no decimal point. Row order follows the graph's own index
/// assignment, so equal graphs that interned their nodes in different
/// orders emit the same rows in different orders.
/// [`parse_weighted_edge_list`] reads the output back to an equal graph as
/// long as labels contain no delimiter characters. The one lossy case is a
/// node with no edges at all: an edge list has nowhere to mention it.
pub fn serialize(g: &MultiDigraph) -> String {
    let mut out = String::from("source,target,weight\n");
    for (u, v, w) in g.edges() {
        out.push_str(&format!("{},{},{}\n", g.label(u), g.label(v), w));
    }
    out
}
