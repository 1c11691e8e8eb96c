//! `lowkey`: analyze | batch | generate | render.
//!
//! Thin shell over the library: flag parsing, an optional TOML config file
//! (flags win over config values, config wins over defaults), report file
//! writing, and exit codes. 0 success, 2 bad configuration or usage, 3
//! unusable input, 4 convergence failure, 1 anything else. Log level comes
//! from the `LKL_LOG` environment variable.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Progress lines are informational; a closed pipe must not kill the run.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use lowkey::centrality::{ConMode, Orientation, PageRankParams};
use lowkey::ingest::{detect_format, serialize, DatasetDescriptor, DirectionConvention, Format, SignFilter};
use lowkey::lkl::Leader;
use lowkey::pipeline::{
    analyze_file, batch_aggregate_csv, batch_directory, batch_verdicts_csv, report_csv,
    report_json, AnalysisOptions, PipelineError, SCHEMA_VERSION,
};
use lowkey::ranking_model::{
    copy_node_analysis, generate, in_degree_distribution, CopyNodeAnalysis, RankingModelParams,
};
use lowkey::render::{render_histogram_svg, render_slope_svg};

#[derive(Parser)]
#[command(name = "lowkey", version, about = "Low-key leader detection in adversarial directed networks")]
struct Cli {
    /// TOML config file with the same keys as the long flags
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score one network and write a JSON report plus a CSV table
    Analyze(AnalyzeArgs),
    /// Analyze every file in a directory and tally LKL prevalence
    Batch(BatchArgs),
    /// Generate digraphs from the rank-based random model
    Generate(GenerateArgs),
    /// Render slope-graph and score-histogram SVGs for one network
    Render(RenderArgs),
}

#[derive(Clone, Copy, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum FormatArg {
    DominanceMatrix,
    SignedEdgeList,
    WeightedEdgeList,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::DominanceMatrix => Format::DominanceMatrix,
            FormatArg::SignedEdgeList => Format::SignedEdgeList,
            FormatArg::WeightedEdgeList => Format::WeightedEdgeList,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum DirectionArg {
    ColumnDominatesRow,
    RowDominatesColumn,
}

impl From<DirectionArg> for DirectionConvention {
    fn from(d: DirectionArg) -> DirectionConvention {
        match d {
            DirectionArg::ColumnDominatesRow => DirectionConvention::ColumnDominatesRow,
            DirectionArg::RowDominatesColumn => DirectionConvention::RowDominatesColumn,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum ConModeArg {
    Binarized,
    Weighted,
}

impl From<ConModeArg> for ConMode {
    fn from(m: ConModeArg) -> ConMode {
        match m {
            ConModeArg::Binarized => ConMode::Binarized,
            ConModeArg::Weighted => ConMode::Weighted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum OrientationArg {
    Reversed,
    Forward,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Orientation {
        match o {
            OrientationArg::Reversed => Orientation::Reversed,
            OrientationArg::Forward => Orientation::Forward,
        }
    }
}

/// Flags shared by analyze, batch, and render.
#[derive(Args)]
struct AnalysisFlags {
    /// Input format; detected from the file name when omitted
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Dominance matrix reading convention
    #[arg(long, value_enum)]
    direction: Option<DirectionArg>,
    /// How edge weights enter the CON score
    #[arg(long, value_enum)]
    con_mode: Option<ConModeArg>,
    /// Weight-proportional random-walk transitions
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pr_weighted: Option<bool>,
    /// Run the walk on reversed edges (adversarial default) or as stored
    #[arg(long, value_enum)]
    pr_orientation: Option<OrientationArg>,
    /// PageRank damping factor, strictly between 0 and 1
    #[arg(long)]
    damping: Option<f64>,
    /// L1 convergence tolerance of the power iteration
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration cap before reporting a convergence failure
    #[arg(long)]
    max_iter: Option<usize>,
    /// ε threshold for the verdict; repeat for several thresholds
    #[arg(long = "threshold", value_name = "T")]
    thresholds: Vec<f64>,
    /// Rank difference that counts as a movement in the slope graph
    #[arg(long)]
    movement_threshold: Option<usize>,
    /// Truncate tables and figures to the top K nodes by ε
    #[arg(long)]
    top_k: Option<usize>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Network file to analyze
    input: PathBuf,
    #[command(flatten)]
    flags: AnalysisFlags,
    /// Also write slope-graph and histogram SVGs
    #[arg(long)]
    svg: bool,
    /// Directory for output files
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct BatchArgs {
    /// Directory of network files
    dir: PathBuf,
    #[command(flatten)]
    flags: AnalysisFlags,
    /// Directory for output files
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Node count
    #[arg(long)]
    n: Option<usize>,
    /// Attachment strength in (0, 1)
    #[arg(long)]
    alpha: Option<f64>,
    /// Seed of the first run; run k uses seed + k
    #[arg(long)]
    seed: Option<u64>,
    /// Number of graphs to generate
    #[arg(long)]
    runs: Option<usize>,
    /// Directory for output files
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderKind {
    Slope,
    Histogram,
    Both,
}

#[derive(Args)]
struct RenderArgs {
    /// Network file to analyze and render
    input: PathBuf,
    #[command(flatten)]
    flags: AnalysisFlags,
    /// Which figure(s) to write
    #[arg(long, value_enum, default_value = "both")]
    kind: RenderKind,
    /// Directory for output files
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

/// TOML config keys, spelled exactly like the long flags.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    format: Option<FormatArg>,
    direction: Option<DirectionArg>,
    con_mode: Option<ConModeArg>,
    pr_weighted: Option<bool>,
    pr_orientation: Option<OrientationArg>,
    damping: Option<f64>,
    tol: Option<f64>,
    max_iter: Option<usize>,
    threshold: Option<Vec<f64>>,
    movement_threshold: Option<usize>,
    top_k: Option<usize>,
    out_dir: Option<PathBuf>,
    n: Option<usize>,
    alpha: Option<f64>,
    seed: Option<u64>,
    runs: Option<usize>,
}

fn load_config(path: Option<&Path>) -> Result<FileConfig, PipelineError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    toml::from_str(&text)
        .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))
}

fn resolve_options(flags: &AnalysisFlags, cfg: &FileConfig) -> AnalysisOptions {
    let d = AnalysisOptions::default();
    AnalysisOptions {
        con_mode: flags
            .con_mode
            .or(cfg.con_mode)
            .map_or(d.con_mode, ConMode::from),
        pagerank: PageRankParams {
            damping: flags.damping.or(cfg.damping).unwrap_or(d.pagerank.damping),
            tol: flags.tol.or(cfg.tol).unwrap_or(d.pagerank.tol),
            max_iter: flags
                .max_iter
                .or(cfg.max_iter)
                .unwrap_or(d.pagerank.max_iter),
            weighted: flags
                .pr_weighted
                .or(cfg.pr_weighted)
                .unwrap_or(d.pagerank.weighted),
        },
        orientation: flags
            .pr_orientation
            .or(cfg.pr_orientation)
            .map_or(d.orientation, Orientation::from),
        thresholds: if !flags.thresholds.is_empty() {
            flags.thresholds.clone()
        } else {
            cfg.threshold.clone().unwrap_or(d.thresholds)
        },
        movement_threshold: flags
            .movement_threshold
            .or(cfg.movement_threshold)
            .unwrap_or(d.movement_threshold),
        top_k: flags.top_k.or(cfg.top_k),
    }
}

fn descriptor(
    input: &Path,
    flags: &AnalysisFlags,
    cfg: &FileConfig,
) -> Result<DatasetDescriptor, PipelineError> {
    let format = flags
        .format
        .or(cfg.format)
        .map(Format::from)
        .or_else(|| detect_format(input))
        .ok_or_else(|| PipelineError::UnknownFormat {
            path: input.to_path_buf(),
        })?;
    Ok(DatasetDescriptor {
        path: input.to_path_buf(),
        format,
        direction: flags
            .direction
            .or(cfg.direction)
            .map_or_else(DirectionConvention::default, DirectionConvention::from),
        sign_filter: SignFilter::NegativeOnly,
    })
}

/// Output base name: the input's file name up to its first dot.
fn stem(input: &Path) -> String {
    let name = input
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "network".to_owned());
    name.split('.').next().unwrap_or("network").to_owned()
}

fn out_dir(explicit: Option<&Path>, cfg: &FileConfig) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."))
}

fn write_output(dir: &Path, name: &str, content: &str) -> Result<PathBuf, PipelineError> {
    fs::create_dir_all(dir).map_err(|source| PipelineError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, content).map_err(|source| PipelineError::Io {
        path: path.clone(),
        source,
    })?;
    say!("wrote {}", path.display());
    Ok(path)
}

fn cmd_analyze(args: &AnalyzeArgs, cfg: &FileConfig) -> Result<(), PipelineError> {
    let options = resolve_options(&args.flags, cfg);
    let d = descriptor(&args.input, &args.flags, cfg)?;
    let (outcome, meta) = analyze_file(&d, &options)?;
    say!(
        "{}: {} nodes, {} edges, total weight {}",
        meta.path, meta.nodes, meta.edges, meta.total_weight
    );
    for v in &outcome.verdicts {
        let labels: Vec<&str> = v.leaders.iter().map(|l| l.label.as_str()).collect();
        say!(
            "threshold {}: {} (epsilon_max {:.6}, argmax {})",
            v.threshold,
            if v.exists { "low-key leader present" } else { "no low-key leader" },
            v.epsilon_max,
            labels.join(", ")
        );
    }
    let dir = out_dir(args.out_dir.as_deref(), cfg);
    let base = stem(&args.input);
    write_output(&dir, &format!("{base}.report.json"), &report_json(&meta, &options, &outcome))?;
    write_output(&dir, &format!("{base}.table.csv"), &report_csv(&outcome, options.top_k))?;
    if args.svg {
        write_output(&dir, &format!("{base}.slope.svg"), &render_slope_svg(&outcome.slope))?;
        write_output(
            &dir,
            &format!("{base}.histogram.svg"),
            &render_histogram_svg(&outcome.report, options.top_k),
        )?;
    }
    Ok(())
}

fn cmd_batch(args: &BatchArgs, cfg: &FileConfig) -> Result<(), PipelineError> {
    let options = resolve_options(&args.flags, cfg);
    let format = args.flags.format.or(cfg.format).map(Format::from);
    let direction = args
        .flags
        .direction
        .or(cfg.direction)
        .map_or_else(DirectionConvention::default, DirectionConvention::from);
    let outcome = batch_directory(&args.dir, &options, format, direction)?;
    for a in &outcome.aggregates {
        say!(
            "threshold {}: {}/{} networks with a low-key leader ({:.2}%)",
            a.threshold,
            a.count_with_lkl,
            a.total,
            100.0 * a.fraction
        );
    }
    if !outcome.skipped.is_empty() {
        say!("skipped {} file(s); see batch_summary.json", outcome.skipped.len());
    }
    let dir = out_dir(args.out_dir.as_deref(), cfg);
    write_output(&dir, "batch_verdicts.csv", &batch_verdicts_csv(&outcome, &options.thresholds))?;
    write_output(&dir, "batch_aggregate.csv", &batch_aggregate_csv(&outcome))?;
    let mut json = serde_json::to_string_pretty(&outcome).expect("summary serializes");
    json.push('\n');
    write_output(&dir, "batch_summary.json", &json)?;
    Ok(())
}

#[derive(Serialize)]
struct RunSidecar<'a> {
    schema_version: u32,
    n: usize,
    alpha: f64,
    seed: u64,
    copy_node: &'a Leader,
    template_node: &'a Leader,
    analysis: &'a CopyNodeAnalysis,
    in_degree: InDegreeSummary,
}

#[derive(Serialize)]
struct InDegreeSummary {
    max: usize,
    mean: f64,
    stddev: f64,
    tail_fraction: f64,
}

#[derive(Serialize)]
struct GenerateSummary {
    schema_version: u32,
    n: usize,
    alpha: f64,
    base_seed: u64,
    runs: usize,
    copy_is_lkl_count: usize,
    copy_is_lkl_fraction: f64,
    per_run: Vec<RunSummary>,
}

#[derive(Serialize)]
struct RunSummary {
    seed: u64,
    copy_node: Leader,
    template_node: Leader,
    epsilon_of_copy: f64,
    copy_is_lkl: bool,
}

fn cmd_generate(args: &GenerateArgs, cfg: &FileConfig) -> Result<(), PipelineError> {
    let defaults = RankingModelParams::default();
    let n = args.n.or(cfg.n).unwrap_or(defaults.n);
    let alpha = args.alpha.or(cfg.alpha).unwrap_or(defaults.alpha);
    let base_seed = args.seed.or(cfg.seed).unwrap_or(defaults.seed);
    let runs = args.runs.or(cfg.runs).unwrap_or(1);
    if runs < 1 {
        return Err(PipelineError::Config("runs must be at least 1".into()));
    }
    let dir = out_dir(args.out_dir.as_deref(), cfg);
    let mut per_run = Vec::with_capacity(runs);
    let mut lkl_count = 0usize;
    for k in 0..runs {
        let seed = base_seed + k as u64;
        let params = RankingModelParams::new(n, alpha, seed)
            .map_err(|e| PipelineError::Config(e.to_string()))?;
        let gg = generate(&params).map_err(|e| PipelineError::Config(e.to_string()))?;
        let analysis = copy_node_analysis(&gg);
        let hist = in_degree_distribution(&gg.graph);
        let copy = Leader {
            index: gg.copy_node.index(),
            label: gg.graph.label(gg.copy_node).to_owned(),
        };
        let template = Leader {
            index: gg.template_node.index(),
            label: gg.graph.label(gg.template_node).to_owned(),
        };
        let base = format!("model_n{n}_a{alpha}_s{seed}");
        write_output(&dir, &format!("{base}.csv"), &serialize(&gg.graph))?;
        let sidecar = RunSidecar {
            schema_version: SCHEMA_VERSION,
            n,
            alpha,
            seed,
            copy_node: &copy,
            template_node: &template,
            analysis: &analysis,
            in_degree: InDegreeSummary {
                max: hist.max_degree,
                mean: hist.mean,
                stddev: hist.stddev,
                tail_fraction: hist.tail_fraction,
            },
        };
        let mut sidecar_json = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
        sidecar_json.push('\n');
        write_output(&dir, &format!("{base}.sidecar.json"), &sidecar_json)?;
        let mut hist_csv = String::from("in_degree,count\n");
        for (deg, count) in hist.entries() {
            hist_csv.push_str(&format!("{deg},{count}\n"));
        }
        write_output(&dir, &format!("{base}.indegree.csv"), &hist_csv)?;
        if analysis.copy_is_lkl {
            lkl_count += 1;
        }
        say!(
            "seed {seed}: copy node {} (rank {}), epsilon {:.4}, low-key leader: {}",
            copy.label,
            copy.index + 1,
            analysis.epsilon_of_copy,
            if analysis.copy_is_lkl { "yes" } else { "no" }
        );
        per_run.push(RunSummary {
            seed,
            copy_node: copy,
            template_node: template,
            epsilon_of_copy: analysis.epsilon_of_copy,
            copy_is_lkl: analysis.copy_is_lkl,
        });
    }
    let summary = GenerateSummary {
        schema_version: SCHEMA_VERSION,
        n,
        alpha,
        base_seed,
        runs,
        copy_is_lkl_count: lkl_count,
        copy_is_lkl_fraction: lkl_count as f64 / runs as f64,
        per_run,
    };
    let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    json.push('\n');
    write_output(&dir, "generate_summary.json", &json)?;
    say!(
        "copy node was the low-key leader in {lkl_count}/{runs} runs ({:.1}%)",
        100.0 * lkl_count as f64 / runs as f64
    );
    Ok(())
}

fn cmd_render(args: &RenderArgs, cfg: &FileConfig) -> Result<(), PipelineError> {
    let options = resolve_options(&args.flags, cfg);
    let d = descriptor(&args.input, &args.flags, cfg)?;
    let (outcome, _meta) = analyze_file(&d, &options)?;
    let dir = out_dir(args.out_dir.as_deref(), cfg);
    let base = stem(&args.input);
    if matches!(args.kind, RenderKind::Slope | RenderKind::Both) {
        write_output(&dir, &format!("{base}.slope.svg"), &render_slope_svg(&outcome.slope))?;
    }
    if matches!(args.kind, RenderKind::Histogram | RenderKind::Both) {
        write_output(
            &dir,
            &format!("{base}.histogram.svg"),
            &render_histogram_svg(&outcome.report, options.top_k),
        )?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), PipelineError> {
    let cfg = load_config(cli.config.as_deref())?;
    match &cli.command {
        Command::Analyze(args) => cmd_analyze(args, &cfg),
        Command::Batch(args) => cmd_batch(args, &cfg),
        Command::Generate(args) => cmd_generate(args, &cfg),
        Command::Render(args) => cmd_render(args, &cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LKL_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            use std::io::Write;
            let _ = writeln!(std::io::stderr(), "error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
