//! End-to-end analysis: load, score, judge, emit.
//!
//! This layer owns everything the binary and the examples share: reading
//! and hashing input files, running CON + PageRank + ε on a graph,
//! assembling versioned JSON reports, per-node CSV tables, and directory
//! batches. Reports are pure functions of (input bytes, options), with no
//! timestamps or machine state, so re-running a recorded configuration
//! reproduces the bytes exactly.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::centrality::{
    con_scores, pagerank_oriented, CentralityError, ConMode, Orientation, PageRankParams,
};
use crate::graph::MultiDigraph;
use crate::ingest::{
    detect_format, parse_dataset, DatasetDescriptor, DirectionConvention, Format, ParseError,
    SignFilter,
};
use crate::lkl::{
    detect_lkl, epsilon_scores, slope_graph, CentralityReport, LklError, LklVerdict,
    SlopeGraphSpec,
};

/// Version stamp for every JSON document this module writes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Centrality(#[from] CentralityError),
    #[error(transparent)]
    Lkl(#[from] LklError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Config(String),
    #[error("cannot determine the format of {path} from its name; pass an explicit format")]
    UnknownFormat { path: PathBuf },
}

impl PipelineError {
    /// Process exit code for this failure: 2 bad configuration or usage,
    /// 3 unusable input, 4 convergence failure, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            PipelineError::Config(_) | PipelineError::UnknownFormat { .. } => 2,
            PipelineError::Parse { .. } => 3,
            PipelineError::Centrality(CentralityError::NoConvergence { .. }) => 4,
            PipelineError::Centrality(CentralityError::EmptyGraph) => 3,
            _ => 1,
        }
    }
}

/// Everything configurable about one analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisOptions {
    pub con_mode: ConMode,
    #[serde(flatten)]
    pub pagerank: PageRankParams,
    pub orientation: Orientation,
    /// ε thresholds to judge at; each in [0, 1]. The first one drives the
    /// headline verdict.
    pub thresholds: Vec<f64>,
    pub movement_threshold: usize,
    /// Display truncation for tables and figures. The JSON report always
    /// carries every node.
    pub top_k: Option<usize>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            con_mode: ConMode::Binarized,
            pagerank: PageRankParams::default(),
            orientation: Orientation::Reversed,
            thresholds: vec![0.5],
            movement_threshold: 5,
            top_k: None,
        }
    }
}

impl AnalysisOptions {
    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.thresholds.is_empty() {
            return Err(PipelineError::Config("at least one threshold is required".into()));
        }
        for &t in &self.thresholds {
            if !(0.0..=1.0).contains(&t) {
                return Err(PipelineError::Config(format!(
                    "threshold must lie in [0, 1], got {t}"
                )));
            }
        }
        if self.movement_threshold == 0 {
            return Err(PipelineError::Config("movement threshold must be at least 1".into()));
        }
        if !(self.pagerank.damping > 0.0 && self.pagerank.damping < 1.0) {
            return Err(PipelineError::Config(format!(
                "damping must lie strictly between 0 and 1, got {}",
                self.pagerank.damping
            )));
        }
        if self.top_k == Some(0) {
            return Err(PipelineError::Config("top-k must be at least 1".into()));
        }
        Ok(())
    }
}

/// Scores and verdicts for one graph.
#[derive(Debug, Clone)]
pub struct AnalysisOutcome {
    pub report: CentralityReport,
    /// One verdict per requested threshold, in request order.
    pub verdicts: Vec<LklVerdict>,
    pub slope: SlopeGraphSpec,
}

impl AnalysisOutcome {
    /// The verdict at the first requested threshold.
    pub fn verdict(&self) -> &LklVerdict {
        &self.verdicts[0]
    }
}

/// Runs the full scoring pipeline on an already-loaded graph.
pub fn analyze_graph(
    g: &MultiDigraph,
    options: &AnalysisOptions,
) -> Result<AnalysisOutcome, PipelineError> {
    options.validate()?;
    let con = con_scores(g, options.con_mode);
    let pr = pagerank_oriented(g, options.orientation, &options.pagerank)?;
    let report = epsilon_scores(g, &con, &pr)?;
    let verdicts = options
        .thresholds
        .iter()
        .map(|&t| detect_lkl(&report, t))
        .collect();
    let slope = slope_graph(&report, options.movement_threshold);
    Ok(AnalysisOutcome {
        report,
        verdicts,
        slope,
    })
}

/// Input provenance recorded into every report.
#[derive(Debug, Clone, Serialize)]
pub struct InputMeta {
    pub path: String,
    pub format: Format,
    pub direction: DirectionConvention,
    pub sha256: String,
    pub nodes: usize,
    pub edges: usize,
    pub total_weight: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Loads a file per its descriptor and records its provenance.
pub fn load_dataset(d: &DatasetDescriptor) -> Result<(MultiDigraph, InputMeta), PipelineError> {
    let text = fs::read_to_string(&d.path).map_err(|source| PipelineError::Io {
        path: d.path.clone(),
        source,
    })?;
    let graph = parse_dataset(d, &text).map_err(|source| PipelineError::Parse {
        path: d.path.clone(),
        source,
    })?;
    log::info!(
        "{}: {} nodes, {} edges ({})",
        d.path.display(),
        graph.node_count(),
        graph.edge_count(),
        d.format
    );
    let meta = InputMeta {
        path: d.path.display().to_string(),
        format: d.format,
        direction: d.direction,
        sha256: sha256_hex(text.as_bytes()),
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        total_weight: graph.total_weight(),
    };
    Ok((graph, meta))
}

/// [`load_dataset`] followed by [`analyze_graph`].
pub fn analyze_file(
    d: &DatasetDescriptor,
    options: &AnalysisOptions,
) -> Result<(AnalysisOutcome, InputMeta), PipelineError> {
    let (graph, meta) = load_dataset(d)?;
    let outcome = analyze_graph(&graph, options)?;
    Ok((outcome, meta))
}

#[derive(Serialize)]
struct JsonReport<'a> {
    schema_version: u32,
    input: &'a InputMeta,
    parameters: &'a AnalysisOptions,
    pagerank: PagerankMeta,
    normalization: NormalizationMeta,
    nodes: &'a [crate::lkl::NodeRecord],
    verdicts: &'a [LklVerdict],
}

#[derive(Serialize)]
struct PagerankMeta {
    iterations: usize,
    residual: f64,
}

#[derive(Serialize)]
struct NormalizationMeta {
    con_degenerate: bool,
    pr_degenerate: bool,
}

/// The versioned JSON report: provenance, parameters, every node's scores,
/// and one verdict per threshold.
pub fn report_json(meta: &InputMeta, options: &AnalysisOptions, outcome: &AnalysisOutcome) -> String {
    let doc = JsonReport {
        schema_version: SCHEMA_VERSION,
        input: meta,
        parameters: options,
        pagerank: PagerankMeta {
            iterations: outcome.report.iterations,
            residual: outcome.report.residual,
        },
        normalization: NormalizationMeta {
            con_degenerate: outcome.report.con_degenerate,
            pr_degenerate: outcome.report.pr_degenerate,
        },
        nodes: outcome.report.records(),
        verdicts: &outcome.verdicts,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

/// Per-node score table in ε-descending order, truncated to `top_k` when
/// set. Mirrors the JSON `nodes` section for spreadsheet use.
pub fn report_csv(outcome: &AnalysisOutcome, top_k: Option<usize>) -> String {
    let records = outcome.report.records();
    let shown = top_k.map_or(records.len(), |k| k.min(records.len()));
    let mut s = String::from("label,con,pr,con_norm,pr_norm,epsilon\n");
    for r in &records[..shown] {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.label, r.con, r.pr, r.con_norm, r.pr_norm, r.epsilon
        ));
    }
    s
}

/// One network's row in a batch run.
#[derive(Debug, Clone, Serialize)]
pub struct BatchEntry {
    pub file: String,
    pub nodes: usize,
    pub edges: usize,
    pub epsilon_max: f64,
    /// Labels of the argmax-ε set.
    pub leaders: Vec<String>,
    /// exists-flag per requested threshold, in request order.
    pub exists_at: Vec<bool>,
}

/// Aggregate LKL prevalence at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchAggregate {
    pub threshold: f64,
    pub count_with_lkl: usize,
    pub total: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchOutcome {
    pub schema_version: u32,
    pub entries: Vec<BatchEntry>,
    pub aggregates: Vec<BatchAggregate>,
    /// (file name, reason) for inputs that failed to parse or analyze.
    pub skipped: Vec<(String, String)>,
}

/// Analyzes every regular file in `dir` and tallies LKL prevalence at each
/// requested threshold.
///
/// Files run in parallel; entries come back sorted by file name regardless
/// of scheduling. `format` forces one parser for all files, otherwise each
/// file is detected from its name. Unusable files (undetectable format,
/// parse failure, non-convergence) are recorded as skipped rather than
/// aborting the batch.
pub fn batch_directory(
    dir: &Path,
    options: &AnalysisOptions,
    format: Option<Format>,
    direction: DirectionConvention,
) -> Result<BatchOutcome, PipelineError> {
    options.validate()?;
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|source| PipelineError::Io {
            path: dir.to_path_buf(),
            source,
        })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(PipelineError::Config(format!(
            "no files to analyze in {}",
            dir.display()
        )));
    }

    let results: Vec<_> = paths
        .par_iter()
        .map(|path| {
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            let run = || {
                let fmt = match format {
                    Some(f) => f,
                    None => detect_format(path).ok_or_else(|| PipelineError::UnknownFormat {
                        path: path.clone(),
                    })?,
                };
                let descriptor = DatasetDescriptor {
                    path: path.clone(),
                    format: fmt,
                    direction,
                    sign_filter: SignFilter::NegativeOnly,
                };
                analyze_file(&descriptor, options)
            };
            (name, run())
        })
        .collect();

    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for (name, result) in results {
        match result {
            Ok((outcome, meta)) => {
                let first = outcome.verdict();
                entries.push(BatchEntry {
                    file: name,
                    nodes: meta.nodes,
                    edges: meta.edges,
                    epsilon_max: first.epsilon_max,
                    leaders: first.leaders.iter().map(|l| l.label.clone()).collect(),
                    exists_at: outcome.verdicts.iter().map(|v| v.exists).collect(),
                });
            }
            Err(e) => {
                log::warn!("skipping {name}: {e}");
                skipped.push((name, e.to_string()));
            }
        }
    }
    if entries.is_empty() {
        return Err(PipelineError::Config(format!(
            "no file in {} could be analyzed ({} skipped)",
            dir.display(),
            skipped.len()
        )));
    }
    let total = entries.len();
    let aggregates = options
        .thresholds
        .iter()
        .enumerate()
        .map(|(i, &threshold)| {
            let count_with_lkl = entries.iter().filter(|e| e.exists_at[i]).count();
            BatchAggregate {
                threshold,
                count_with_lkl,
                total,
                fraction: count_with_lkl as f64 / total as f64,
            }
        })
        .collect();
    Ok(BatchOutcome {
        schema_version: SCHEMA_VERSION,
        entries,
        aggregates,
        skipped,
    })
}

/// Per-network verdict table: one row per analyzed file.
pub fn batch_verdicts_csv(outcome: &BatchOutcome, thresholds: &[f64]) -> String {
    let mut s = String::from("file,nodes,edges,epsilon_max,leaders");
    for t in thresholds {
        s.push_str(&format!(",exists_at_{t}"));
    }
    s.push('\n');
    for e in &outcome.entries {
        s.push_str(&format!(
            "{},{},{},{},{}",
            e.file,
            e.nodes,
            e.edges,
            e.epsilon_max,
            e.leaders.join(";")
        ));
        for x in &e.exists_at {
            s.push_str(if *x { ",true" } else { ",false" });
        }
        s.push('\n');
    }
    s
}

/// Aggregate counts per threshold.
pub fn batch_aggregate_csv(outcome: &BatchOutcome) -> String {
    let mut s = String::from("threshold,count_with_lkl,total,fraction\n");
    for a in &outcome.aggregates {
        s.push_str(&format!(
            "{},{},{},{}\n",
            a.threshold, a.count_with_lkl, a.total, a.fraction
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightKind;
    use std::io::Write;

    fn write_file(dir: &Path, name: &str, content: &str) {
        let mut f = fs::File::create(dir.join(name)).unwrap();
        f.write_all(content.as_bytes()).unwrap();
    }

    fn star_graph() -> MultiDigraph {
        let mut g = MultiDigraph::new(WeightKind::Count);
        let c = g.intern("c");
        for l in ["a", "b", "d"] {
            let u = g.intern(l);
            g.add_edge(u, c, 1.0).unwrap();
        }
        let (c, a) = (g.node_by_label("c").unwrap(), g.node_by_label("a").unwrap());
        g.add_edge(c, a, 1.0).unwrap();
        g
    }

    #[test]
    fn analyze_graph_produces_consistent_sections() {
        let g = star_graph();
        let options = AnalysisOptions {
            thresholds: vec![0.5, 0.9],
            ..Default::default()
        };
        let outcome = analyze_graph(&g, &options).unwrap();
        assert_eq!(outcome.verdicts.len(), 2);
        assert_eq!(outcome.verdicts[0].threshold, 0.5);
        assert_eq!(outcome.slope.rows.len(), g.node_count());
        assert_eq!(outcome.report.len(), g.node_count());
    }

    #[test]
    fn options_validation_rejects_nonsense() {
        let g = star_graph();
        for options in [
            AnalysisOptions { thresholds: vec![], ..Default::default() },
            AnalysisOptions { thresholds: vec![1.5], ..Default::default() },
            AnalysisOptions { movement_threshold: 0, ..Default::default() },
            AnalysisOptions { top_k: Some(0), ..Default::default() },
            AnalysisOptions {
                pagerank: PageRankParams { damping: 1.0, ..Default::default() },
                ..Default::default()
            },
        ] {
            let err = analyze_graph(&g, &options).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{err}");
        }
    }

    #[test]
    fn report_json_is_versioned_and_deterministic() {
        let g = star_graph();
        let options = AnalysisOptions::default();
        let outcome = analyze_graph(&g, &options).unwrap();
        let meta = InputMeta {
            path: "star.csv".into(),
            format: Format::WeightedEdgeList,
            direction: DirectionConvention::ColumnDominatesRow,
            sha256: sha256_hex(b"star"),
            nodes: g.node_count(),
            edges: g.edge_count(),
            total_weight: g.total_weight(),
        };
        let a = report_json(&meta, &options, &outcome);
        let b = report_json(&meta, &options, &outcome);
        assert_eq!(a, b);
        let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(parsed["schema_version"], 1);
        assert_eq!(parsed["nodes"].as_array().unwrap().len(), 4);
        assert_eq!(parsed["verdicts"][0]["threshold"], 0.5);
        assert!(parsed["input"]["sha256"].as_str().unwrap().len() == 64);
    }

    #[test]
    fn report_csv_truncates_but_json_does_not() {
        let g = star_graph();
        let options = AnalysisOptions { top_k: Some(2), ..Default::default() };
        let outcome = analyze_graph(&g, &options).unwrap();
        let csv = report_csv(&outcome, options.top_k);
        assert_eq!(csv.lines().count(), 3);
        let meta = InputMeta {
            path: "star.csv".into(),
            format: Format::WeightedEdgeList,
            direction: DirectionConvention::ColumnDominatesRow,
            sha256: sha256_hex(b"star"),
            nodes: 4,
            edges: 4,
            total_weight: 4.0,
        };
        let parsed: serde_json::Value =
            serde_json::from_str(&report_json(&meta, &options, &outcome)).unwrap();
        assert_eq!(parsed["nodes"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn batch_skips_corrupt_files_and_sorts_entries() {
        let dir = tempfile::tempdir().unwrap();
        write_file(
            dir.path(),
            "b_ok.matrix.csv",
            ",x,y,z\nx,0,2,2\ny,1,0,0\nz,1,0,0\n",
        );
        write_file(dir.path(), "a_ok.csv", "p,q,1.5\nq,r,2\np,r,1\n");
        write_file(dir.path(), "broken.matrix.csv", ",x,y\nx,0,oops\ny,1,0\n");
        let options = AnalysisOptions { thresholds: vec![0.4, 0.5], ..Default::default() };
        let outcome = batch_directory(
            dir.path(),
            &options,
            None,
            DirectionConvention::ColumnDominatesRow,
        )
        .unwrap();
        assert_eq!(outcome.entries.len(), 2);
        assert_eq!(outcome.entries[0].file, "a_ok.csv");
        assert_eq!(outcome.entries[1].file, "b_ok.matrix.csv");
        assert_eq!(outcome.skipped.len(), 1);
        assert_eq!(outcome.skipped[0].0, "broken.matrix.csv");
        assert_eq!(outcome.aggregates.len(), 2);
        assert_eq!(outcome.aggregates[0].total, 2);
        // Monotone: the looser threshold can only admit more networks.
        assert!(outcome.aggregates[0].count_with_lkl >= outcome.aggregates[1].count_with_lkl);

        let verdicts = batch_verdicts_csv(&outcome, &options.thresholds);
        assert!(verdicts.starts_with("file,nodes,edges,epsilon_max,leaders,exists_at_0.4,exists_at_0.5\n"));
        assert_eq!(verdicts.lines().count(), 3);
        let agg = batch_aggregate_csv(&outcome);
        assert_eq!(agg.lines().count(), 3);
    }

    #[test]
    fn batch_of_empty_directory_errors() {
        let dir = tempfile::tempdir().unwrap();
        let err = batch_directory(
            dir.path(),
            &AnalysisOptions::default(),
            None,
            DirectionConvention::ColumnDominatesRow,
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn exit_codes_map_by_failure_kind() {
        assert_eq!(
            PipelineError::Parse {
                path: "x".into(),
                source: ParseError::Empty
            }
            .exit_code(),
            3
        );
        assert_eq!(
            PipelineError::Centrality(CentralityError::NoConvergence {
                iterations: 5,
                residual: 0.1
            })
            .exit_code(),
            4
        );
        assert_eq!(PipelineError::Config("bad".into()).exit_code(), 2);
        assert_eq!(
            PipelineError::Io {
                path: "x".into(),
                source: std::io::Error::other("io")
            }
            .exit_code(),
            1
        );
    }
}
