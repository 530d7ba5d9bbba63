//! Command-line driver: reads an edge list, runs a dismantling strategy and
//! writes the fragmentation curve, a JSON summary and optionally an SVG plot.

pub mod output;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use dismantle_core::{
    adaptive_degree_plan, aggregate_curves, fragmentation_curve, gnd, gndr, parse_edge_list, random_removal_plan,
    CostModel, CoverStrategy, DismantlingPlan, ExternalWeights, GndOptions, Graph, SpectralConfig, Target,
    TrajectoryPoint, WeightRecompute,
};

use output::{RemovedNode, SeedRun, Summary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CostArg {
    Unit,
    Degree,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Gnd,
    Gndr,
    Random,
    DegreeAttack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoverArg {
    Wvc,
    Naive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecomputeArg {
    Current,
    Original,
}

/// Cost-aware network dismantling.
#[derive(Debug, Clone, Parser)]
#[command(name = "dismantle", version)]
pub struct Args {
    /// Edge list: two node ids per line, `#`/`%` comments.
    #[arg(long)]
    pub input: PathBuf,

    /// Node weights (`node_id weight` per line), required with `--cost file`.
    #[arg(long, required_if_eq("cost", "file"))]
    pub weights: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = CostArg::Degree)]
    pub cost: CostArg,

    #[arg(long, value_enum, default_value_t = MethodArg::Gnd)]
    pub method: MethodArg,

    /// Largest allowed component as a fraction of the node count [default: 0.01].
    #[arg(long, conflicts_with = "target_size", value_parser = parse_fraction)]
    pub target_fraction: Option<f64>,

    /// Largest allowed component in nodes.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub target_size: Option<u64>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Number of random-removal runs to aggregate (seeds `seed..seed+seeds`).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub seeds: u64,

    /// Power-iteration budget exponent slack: ceil(ln(n)^(1+epsilon)) steps.
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    pub epsilon: f64,

    /// Minimum number of power-iteration steps.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_iters: u64,

    /// Curve CSV path; the JSON summary goes next to it. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// SVG plot of the curve.
    #[arg(long)]
    pub plot: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = CoverArg::Wvc)]
    pub cover: CoverArg,

    #[arg(long, value_enum, default_value_t = RecomputeArg::Current)]
    pub weight_recompute: RecomputeArg,
}

fn parse_fraction(s: &str) -> std::result::Result<f64, String> {
    let f: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if f > 0.0 && f <= 1.0 {
        Ok(f)
    } else {
        Err(format!("{f} is outside (0, 1]"))
    }
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    let f: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if f > 0.0 && f.is_finite() {
        Ok(f)
    } else {
        Err(format!("{f} must be positive"))
    }
}

impl Args {
    fn target(&self) -> Target {
        match (self.target_size, self.target_fraction) {
            (Some(c), _) => Target::Size(c as usize),
            (None, Some(f)) => Target::Fraction(f),
            (None, None) => Target::Fraction(0.01),
        }
    }

    fn spectral(&self) -> SpectralConfig {
        SpectralConfig {
            epsilon: self.epsilon,
            min_iterations: self.min_iters as usize,
            early_exit: false,
            seed: self.seed,
        }
    }
}

/// Summary path derived from the curve path: `curve.csv` -> `curve.json`.
pub fn summary_path(out: &Path) -> PathBuf {
    if out.extension().is_some_and(|e| e == "json") {
        out.with_extension("summary.json")
    } else {
        out.with_extension("json")
    }
}

fn load_model(args: &Args) -> Result<CostModel> {
    Ok(match args.cost {
        CostArg::Unit => CostModel::Unit,
        CostArg::Degree => CostModel::Degree,
        CostArg::File => {
            let path = args.weights.as_ref().context("--cost file needs --weights")?;
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let weights = ExternalWeights::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
            CostModel::External(weights)
        }
    })
}

fn base_summary(args: &Args, g: &Graph, model: &CostModel, target_size: usize) -> Summary {
    Summary {
        method: args.method.to_possible_value().unwrap().get_name().to_string(),
        target_size,
        cost_model: model.name().to_string(),
        seed: args.seed,
        epsilon: args.epsilon,
        min_iterations: args.min_iters as usize,
        cover: args.cover.to_possible_value().unwrap().get_name().to_string(),
        weight_recompute: args.weight_recompute.to_possible_value().unwrap().get_name().to_string(),
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        total_cost: 0.0,
        final_gcc_fraction: 1.0,
        removed: Vec::new(),
        runs: Vec::new(),
    }
}

fn plan_for(args: &Args, g: &Graph, model: &CostModel, target_size: usize) -> Result<DismantlingPlan> {
    let opts = GndOptions {
        spectral: args.spectral(),
        cover: match args.cover {
            CoverArg::Wvc => CoverStrategy::WeightedVertexCover,
            CoverArg::Naive => CoverStrategy::UpperBoundary,
        },
        recompute: match args.weight_recompute {
            RecomputeArg::Current => WeightRecompute::Current,
            RecomputeArg::Original => WeightRecompute::Original,
        },
    };
    let plan = match args.method {
        MethodArg::Gnd => gnd::<f64>(g, model, target_size, &opts)?,
        MethodArg::Gndr => {
            let coarse = gnd::<f64>(g, model, target_size, &opts)?;
            gndr(g, &coarse, model, target_size)?
        }
        MethodArg::Random => random_removal_plan(g, target_size, args.seed, model)?,
        MethodArg::DegreeAttack => adaptive_degree_plan(g, target_size, model)?,
    };
    plan.validate(g)?;
    Ok(plan)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

/// Where the curve CSV and summary JSON go.
fn sinks(args: &Args) -> Result<(Box<dyn Write>, Box<dyn Write>)> {
    Ok(match &args.out {
        Some(out) => (Box::new(create(out)?), Box::new(create(&summary_path(out))?)),
        None => (Box::new(io::stdout().lock()), Box::new(io::stderr().lock())),
    })
}

pub fn run(args: &Args) -> Result<()> {
    let started = Instant::now();
    let text = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let g = parse_edge_list(&text).with_context(|| format!("parsing {}", args.input.display()))?;
    let model = load_model(args)?;
    // Surface missing external weights before any work is done.
    model.normalizer(&g)?;
    let target_size = args.target().resolve(g.node_count())?;
    let mut summary = base_summary(args, &g, &model, target_size);

    let plot_points: Vec<(f64, f64)>;
    if args.method == MethodArg::Random && args.seeds > 1 {
        let mut curves = Vec::with_capacity(args.seeds as usize);
        for seed in args.seed..args.seed + args.seeds {
            let plan = random_removal_plan(&g, target_size, seed, &model)?;
            plan.validate(&g)?;
            let curve = fragmentation_curve(&g, &plan, &model)?;
            let last = curve.last().expect("curves start at step 0");
            summary.runs.push(SeedRun {
                seed,
                total_cost: last.cumulative_cost,
                removed_count: plan.len(),
            });
            curves.push(curve);
        }
        let aggregate = aggregate_curves(&curves, 100);
        let k = summary.runs.len() as f64;
        summary.total_cost = summary.runs.iter().map(|r| r.total_cost).sum::<f64>() / k;
        summary.final_gcc_fraction = curves.iter().map(|c| c.last().unwrap().gcc_fraction).sum::<f64>() / k;
        let (mut csv_out, mut json_out) = sinks(args)?;
        output::write_aggregate_csv(&mut csv_out, &aggregate, curves.len())?;
        output::write_summary_json(&mut json_out, &summary)?;
        writeln!(json_out)?;
        csv_out.flush()?;
        json_out.flush()?;
        plot_points = aggregate.iter().map(|p| (p.cost, p.mean)).collect();
    } else {
        let plan = plan_for(args, &g, &model, target_size)?;
        let curve: Vec<TrajectoryPoint> = fragmentation_curve(&g, &plan, &model)?;
        let last = curve.last().expect("curves start at step 0");
        summary.total_cost = last.cumulative_cost;
        summary.final_gcc_fraction = last.gcc_fraction;
        summary.removed = plan
            .removals
            .iter()
            .map(|r| RemovedNode {
                node: r.original_id,
                cost: r.cost,
            })
            .collect();
        let (mut csv_out, mut json_out) = sinks(args)?;
        output::write_curve_csv(&mut csv_out, &curve)?;
        output::write_summary_json(&mut json_out, &summary)?;
        writeln!(json_out)?;
        csv_out.flush()?;
        json_out.flush()?;
        plot_points = curve.iter().map(|p| (p.cumulative_cost, p.gcc_fraction)).collect();
    }

    if let Some(path) = &args.plot {
        if plot_points.is_empty() {
            bail!("nothing to plot");
        }
        let title = format!("{} / {} cost / C = {}", summary.method, summary.cost_model, target_size);
        fs::write(path, output::render_plot_svg(&plot_points, &title))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    log::info!(
        "{} on {} nodes: total cost {:.6}, wall time {:.3}s",
        summary.method,
        g.node_count(),
        summary.total_cost,
        started.elapsed().as_secs_f64()
    );
    Ok(())
}
