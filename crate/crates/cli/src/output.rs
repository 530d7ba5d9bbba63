//! Curve CSV, run summary JSON and SVG plot writers.

use std::fmt::Write as _;
use std::io::{Read, Write};

use dismantle_core::{AggregatePoint, TrajectoryPoint};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CurveRow {
    step: usize,
    removed_node: Option<u64>,
    cost_increment: f64,
    cumulative_cost: f64,
    gcc_size: usize,
    gcc_fraction: f64,
}

/// Writes one row per trajectory point. Floats use the shortest
/// representation that parses back to the same value.
pub fn write_curve_csv<W: Write>(out: W, curve: &[TrajectoryPoint]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in curve {
        w.serialize(CurveRow {
            step: p.step,
            removed_node: p.removed,
            cost_increment: p.cost_increment,
            cumulative_cost: p.cumulative_cost,
            gcc_size: p.gcc_size,
            gcc_fraction: p.gcc_fraction,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_curve_csv<R: Read>(input: R) -> csv::Result<Vec<TrajectoryPoint>> {
    csv::Reader::from_reader(input)
        .deserialize::<CurveRow>()
        .map(|row| {
            row.map(|r| TrajectoryPoint {
                step: r.step,
                removed: r.removed_node,
                cost_increment: r.cost_increment,
                cumulative_cost: r.cumulative_cost,
                gcc_size: r.gcc_size,
                gcc_fraction: r.gcc_fraction,
            })
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct AggregateRow {
    cost: f64,
    gcc_fraction_mean: f64,
    gcc_fraction_std: f64,
    seeds: usize,
}

pub fn write_aggregate_csv<W: Write>(out: W, points: &[AggregatePoint], seeds: usize) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(AggregateRow {
            cost: p.cost,
            gcc_fraction_mean: p.mean,
            gcc_fraction_std: p.std_dev,
            seeds,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemovedNode {
    pub node: u64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRun {
    pub seed: u64,
    pub total_cost: f64,
    pub removed_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub method: String,
    pub target_size: usize,
    pub cost_model: String,
    pub seed: u64,
    pub epsilon: f64,
    pub min_iterations: usize,
    pub cover: String,
    pub weight_recompute: String,
    pub node_count: usize,
    pub edge_count: usize,
    /// Normalized cumulative cost of the whole plan.
    pub total_cost: f64,
    pub final_gcc_fraction: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub removed: Vec<RemovedNode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub runs: Vec<SeedRun>,
}

pub fn write_summary_json<W: Write>(out: W, summary: &Summary) -> serde_json::Result<()> {
    serde_json::to_writer_pretty(out, summary)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 50.0;

/// Step plot of GCC fraction against cumulative cost on the unit square.
/// `points` are `(cost, gcc_fraction)` pairs in trajectory order.
pub fn render_plot_svg(points: &[(f64, f64)], title: &str) -> String {
    let sx = |c: f64| MARGIN + c.clamp(0.0, 1.0) * (WIDTH - 2.0 * MARGIN);
    let sy = |f: f64| HEIGHT - MARGIN - f.clamp(0.0, 1.0) * (HEIGHT - 2.0 * MARGIN);

    let mut path = String::new();
    for (i, &(c, f)) in points.iter().enumerate() {
        if i > 0 {
            let prev = points[i - 1].1;
            let _ = write!(path, "{:.3},{:.3} ", sx(c), sy(prev));
        }
        let _ = write!(path, "{:.3},{:.3} ", sx(c), sy(f));
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (x0, x1, y0, y1) = (sx(0.0), sx(1.0), sy(0.0), sy(1.0));
    let _ = writeln!(
        svg,
        r#"<path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" fill="none" stroke="black"/>"#
    );
    for tick in 0..=5 {
        let t = tick as f64 / 5.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="11">{t:.1}</text>"#,
            sx(t),
            y0 + 16.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-family="sans-serif" font-size="11">{t:.1}</text>"#,
            x0 - 6.0,
            sy(t) + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">cumulative cost</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 14 {})">GCC fraction</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    let _ = writeln!(
        svg,
        r##"<polyline class="curve" points="{}" fill="none" stroke="#1f5fbf" stroke-width="1.5"/>"##,
        path.trim_end()
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
