//! SVG output.
//!
//! Text-based figures keep the pipeline diffable: the same spec always
//! renders to the same bytes, so golden files and determinism checks work
//! on the figures too. Two renderers: a slope graph comparing the CON and
//! PageRank rankings, and a paired-bar chart contrasting the normalized
//! scores per node.

use std::fmt::Write as _;

use crate::lkl::{CentralityReport, MovementClass, SlopeGraphSpec};

const NEUTRAL: &str = "#888888";
const CON_UP: &str = "#d62728";
const PR_UP: &str = "#1f77b4";

const CON_BAR: &str = "#1f77b4";
const PR_BAR: &str = "#d62728";

fn class_color(class: MovementClass) -> &'static str {
    match class {
        MovementClass::Neutral => NEUTRAL,
        MovementClass::ConUp => CON_UP,
        MovementClass::PrUp => PR_UP,
    }
}

/// Renders the two-column ranking comparison.
///
/// Left column: nodes by CON rank, top first. Right column: the same nodes
/// by PageRank rank. Each node's connecting line and labels take the color
/// of its movement class: grey when the rankings roughly agree, red when
/// the node stands at least the movement threshold higher by CON, blue for
/// the opposite.
pub fn render_slope_svg(spec: &SlopeGraphSpec) -> String {
    let n = spec.rows.len();
    let row_h = 22usize;
    let top = 46usize;
    let left_x = 180usize;
    let right_x = 460usize;
    let width = 640usize;
    let height = top + n * row_h + 24;
    let y = |rank: usize| top + (rank - 1) * row_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    s.push_str("<style>text{font-family:sans-serif;font-size:12px}.h{font-weight:bold;font-size:13px}</style>\n");
    let _ = writeln!(
        s,
        "<text class=\"h\" x=\"{left_x}\" y=\"20\" text-anchor=\"end\">CON</text>"
    );
    let _ = writeln!(
        s,
        "<text class=\"h\" x=\"{right_x}\" y=\"20\" text-anchor=\"start\">PageRank</text>"
    );
    // Lines first so labels stay readable on top of them.
    for row in &spec.rows {
        let color = class_color(row.class);
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            left_x + 8,
            y(row.con_rank) - 4,
            right_x - 8,
            y(row.pr_rank) - 4
        );
    }
    for row in &spec.rows {
        let color = class_color(row.class);
        let _ = writeln!(
            s,
            "<text x=\"{left_x}\" y=\"{}\" text-anchor=\"end\" fill=\"{color}\">{}. {}</text>",
            y(row.con_rank),
            row.con_rank,
            escape(&row.label)
        );
        let _ = writeln!(
            s,
            "<text x=\"{right_x}\" y=\"{}\" text-anchor=\"start\" fill=\"{color}\">{}. {}</text>",
            y(row.pr_rank),
            row.pr_rank,
            escape(&row.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Renders paired vertical bars of normalized CON (blue) and PageRank (red)
/// per node, in ε-descending order, optionally truncated to the top k.
pub fn render_histogram_svg(report: &CentralityReport, top_k: Option<usize>) -> String {
    let records = report.records();
    let shown = top_k.map_or(records.len(), |k| k.min(records.len()));
    let records = &records[..shown];

    let plot_h = 260.0f64;
    let baseline = 300usize;
    let bar_w = 10usize;
    let pitch = 30usize;
    let left = 50usize;
    let width = left + records.len() * pitch + 30;
    let height = baseline + 70;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    s.push_str("<style>text{font-family:sans-serif;font-size:11px}.h{font-weight:bold;font-size:13px}</style>\n");
    let _ = writeln!(s, "<text class=\"h\" x=\"{left}\" y=\"18\">normalized CON vs PageRank</text>");
    // Axis with 0 / 0.5 / 1 ticks.
    for (frac, lbl) in [(0.0, "0"), (0.5, "0.5"), (1.0, "1")] {
        let ty = baseline as f64 - frac * plot_h;
        let _ = writeln!(
            s,
            "<line x1=\"{left}\" y1=\"{ty:.1}\" x2=\"{}\" y2=\"{ty:.1}\" stroke=\"#dddddd\"/>",
            width - 20
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\">{lbl}</text>",
            left - 6,
            ty + 4.0
        );
    }
    for (i, r) in records.iter().enumerate() {
        let x0 = left + i * pitch;
        let con_h = r.con_norm * plot_h;
        let pr_h = r.pr_norm * plot_h;
        let _ = writeln!(
            s,
            "<rect class=\"con\" x=\"{x0}\" y=\"{:.2}\" width=\"{bar_w}\" height=\"{con_h:.2}\" fill=\"{CON_BAR}\"/>",
            baseline as f64 - con_h
        );
        let _ = writeln!(
            s,
            "<rect class=\"pr\" x=\"{}\" y=\"{:.2}\" width=\"{bar_w}\" height=\"{pr_h:.2}\" fill=\"{PR_BAR}\"/>",
            x0 + bar_w + 2,
            baseline as f64 - pr_h
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" transform=\"rotate(-55 {} {})\">{}</text>",
            x0 + bar_w,
            baseline + 14,
            x0 + bar_w,
            baseline + 14,
            escape(&r.label)
        );
    }
    // Legend.
    let lx = width - 130;
    let _ = writeln!(s, "<rect x=\"{lx}\" y=\"28\" width=\"10\" height=\"10\" fill=\"{CON_BAR}\"/>");
    let _ = writeln!(s, "<text x=\"{}\" y=\"37\">CON</text>", lx + 14);
    let _ = writeln!(s, "<rect x=\"{lx}\" y=\"44\" width=\"10\" height=\"10\" fill=\"{PR_BAR}\"/>");
    let _ = writeln!(s, "<text x=\"{}\" y=\"53\">PR</text>", lx + 14);
    s.push_str("</svg>\n");
    s
}

fn escape(label: &str) -> String {
    label
        .replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::{con_scores, pagerank_reversed, ConMode, PageRankParams};
    use crate::graph::{MultiDigraph, WeightKind};
    use crate::lkl::{epsilon_scores, slope_graph};

    fn report(edges: &[(&str, &str)]) -> CentralityReport {
        let mut g = MultiDigraph::new(WeightKind::Count);
        for &(u, v) in edges {
            let a = g.intern(u);
            let b = g.intern(v);
            g.add_edge(a, b, 1.0).unwrap();
        }
        let con = con_scores(&g, ConMode::Binarized);
        let pr = pagerank_reversed(&g, &PageRankParams::default()).unwrap();
        epsilon_scores(&g, &con, &pr).unwrap()
    }

    #[test]
    fn all_neutral_slope_is_three_grey_lines() {
        let rep = report(&[("a", "b"), ("b", "c"), ("c", "a")]);
        let spec = slope_graph(&rep, 5);
        let svg = render_slope_svg(&spec);
        assert!(svg.starts_with("<svg "));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<line ").count(), 3);
        assert_eq!(svg.matches(&format!("stroke=\"{NEUTRAL}\"")).count(), 3);
        assert!(!svg.contains(CON_UP));
    }

    #[test]
    fn con_up_nodes_render_red() {
        // s out-attacks widely but is buried by PageRank once reversed:
        // its victims' mass splits among four attackers each, while every
        // other hunter keeps an exclusive victim feeding it whole.
        let mut edges = vec![("s", "w1"), ("s", "w2")];
        let hunters = ["h1", "h2", "h3", "h4", "h5", "h6"];
        let dens = ["x1", "x2", "x3", "x4", "x5", "x6"];
        for (i, (&h, &x)) in hunters.iter().zip(&dens).enumerate() {
            edges.push((h, if i < 3 { "w1" } else { "w2" }));
            edges.push((h, x));
        }
        let rep = report(&edges);
        let spec = slope_graph(&rep, 5);
        let svg = render_slope_svg(&spec);
        assert!(svg.contains(&format!("stroke=\"{CON_UP}\"")));
        assert!(svg.contains(&format!("fill=\"{CON_UP}\">1. s</text>")));
    }

    #[test]
    fn identical_specs_render_identical_bytes() {
        let rep = report(&[("a", "c"), ("b", "c"), ("c", "a")]);
        let spec = slope_graph(&rep, 2);
        assert_eq!(render_slope_svg(&spec), render_slope_svg(&spec));
        assert_eq!(
            render_histogram_svg(&rep, None),
            render_histogram_svg(&rep, None)
        );
    }

    #[test]
    fn histogram_draws_two_bars_per_shown_node() {
        let rep = report(&[("a", "c"), ("b", "c"), ("c", "a"), ("d", "a")]);
        let svg = render_histogram_svg(&rep, None);
        assert_eq!(svg.matches("<rect class=\"con\"").count(), rep.len());
        assert_eq!(svg.matches("<rect class=\"pr\"").count(), rep.len());

        let truncated = render_histogram_svg(&rep, Some(2));
        assert_eq!(truncated.matches("<rect class=\"con\"").count(), 2);
        // Oversized k falls back to the full set.
        let oversized = render_histogram_svg(&rep, Some(99));
        assert_eq!(oversized.matches("<rect class=\"con\"").count(), rep.len());
    }

    #[test]
    fn labels_are_escaped() {
        let mut g = MultiDigraph::new(WeightKind::Count);
        let a = g.intern("a<b&c");
        let b = g.intern("plain");
        g.add_edge(a, b, 1.0).unwrap();
        let con = con_scores(&g, ConMode::Binarized);
        let pr = pagerank_reversed(&g, &PageRankParams::default()).unwrap();
        let rep = epsilon_scores(&g, &con, &pr).unwrap();
        let svg = render_histogram_svg(&rep, None);
        assert!(svg.contains("a&lt;b&amp;c"));
        assert!(!svg.contains("a<b&c"));
    }
}
