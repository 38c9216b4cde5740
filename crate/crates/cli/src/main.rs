//! `nuv`: nearest-unvisited-vertex walks from the command line.
//!
//! Every subcommand prints one JSON document on stdout; diagnostics go to
//! stderr and files are only written under `--out-dir`.

use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use nuv_core::cover::{default_radii, verify_with_walk};
use nuv_core::io::{read_graph, write_graph, write_points_csv};
use nuv_core::{
    all_pairs_distances, baselines, cover_profile_from_distances, emit_figure_data, exact_cover,
    greedy_cover, nuv_walk, nuv_walk_with, run_experiment_with_workers, EdgeLaw, ExperimentConfig,
    FigureKind, FigureRequest, Instance, InstanceSpec, Model, ProfileMethod, ProfileOptions,
    Scaling, Statistic, VerifyOptions, WalkOptions, EXACT_COVER_LIMIT,
};
use serde_json::{json, Value};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

const AFTER_HELP: &str = "\
Exit codes: 0 success; 1 computational failure (a check failed, or a \
requested statistic could not be computed); 2 usage error (bad flags, \
malformed input files, out-of-range parameters).

Graph file format: a header line `n m`, then m lines `u v length` with \
0-based vertex indices. Blank lines and lines starting with '#' are ignored.";

#[derive(Parser, Debug)]
#[command(name = "nuv", version, about = "Nearest-unvisited-vertex walks on weighted graphs", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one walk and print it as JSON
    #[command(after_help = AFTER_HELP)]
    Walk(WalkArgs),
    /// Print covering numbers at given radii, or the whole cover profile
    #[command(after_help = AFTER_HELP)]
    Cover(CoverArgs),
    /// Check both cover bounds on the walk length and the per-ball step property
    #[command(name = "verify-prop1", after_help = AFTER_HELP)]
    VerifyProp1(VerifyArgs),
    /// Print the MST length and, for n <= 15, the exact shortest covering walk
    #[command(after_help = AFTER_HELP)]
    Baseline(BaselineArgs),
    /// Run a Monte-Carlo experiment and write records.csv and summary.json
    #[command(after_help = EXPERIMENT_HELP)]
    Experiment(ExperimentArgs),
    /// Write figure data (CSV, optionally SVG) under --out-dir
    #[command(after_help = AFTER_HELP)]
    Figure(FigureArgs),
    /// Write an instance as graph.txt (plus points.csv for the square model)
    #[command(after_help = AFTER_HELP)]
    Gen(GenArgs),
}

const EXPERIMENT_HELP: &str = "\
Config file: one `key = value` per line; '#' starts a comment. Keys: model \
(square | grid | mean_field | linear), n (vertex count, not for grid), m \
(grid side), seed (required), replicates, starts (walks per graph), \
statistics (comma separated: length, normalized_length, sd, \
variance_decomposition, start_ratio, diameter, mst, tsp, cover_profile), \
out_dir (relative to the config file), scaling (unit | nearest_neighbor; \
square only), lengths (exponential | uniform; grid only).

Outputs: records.csv with columns replicate,seed,start,L,normalized_L and \
summary.json with every aggregate. The summary (without per-replicate \
records) is also printed on stdout. Results do not depend on --workers.

Exit codes: 0 success; 1 a requested statistic failed its size or \
replication precondition, or the run failed; 2 usage error.";

/// Where the graph comes from: a model with its parameters, or a file.
#[derive(Args, Debug, Clone)]
struct InstanceArgs {
    /// Random graph model: square, grid, mean_field or linear
    #[arg(long, conflicts_with = "graph_file")]
    model: Option<Model>,
    /// Vertex count (square, mean_field, linear)
    #[arg(long)]
    n: Option<usize>,
    /// Grid side; the grid has m*m vertices
    #[arg(long)]
    m: Option<usize>,
    /// Seed for every random draw; required by the random models
    #[arg(long)]
    seed: Option<u64>,
    /// Square model coordinates: unit (the unit square) or nearest_neighbor (scaled by sqrt n)
    #[arg(long)]
    scaling: Option<Scaling>,
    /// Grid edge-length law: exponential (mean 1) or uniform on (0, 1)
    #[arg(long)]
    lengths: Option<EdgeLaw>,
    /// Read the graph from a file in the graph format instead of generating it
    #[arg(long, value_name = "PATH")]
    graph_file: Option<PathBuf>,
}

/// A usage error detected after argument parsing.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

impl InstanceArgs {
    fn spec(&self) -> Result<InstanceSpec> {
        let Some(model) = self.model else {
            return usage("give either --model or --graph-file");
        };
        let size = match model {
            Model::Grid => {
                if self.n.is_some() {
                    return usage("the grid model is sized by --m, not --n");
                }
                self.m
                    .ok_or_else(|| Usage("the grid model needs --m".into()))?
            }
            _ => {
                if self.m.is_some() {
                    return usage(format!("--m applies to the grid model only, not {model}"));
                }
                self.n
                    .ok_or_else(|| Usage(format!("the {model} model needs --n")))?
            }
        };
        let seed = match (model, self.seed) {
            (_, Some(s)) => s,
            (Model::Linear, None) => 0,
            (_, None) => return usage(format!("the {model} model is random and needs --seed")),
        };
        if self.scaling.is_some() && model != Model::Square {
            return usage("--scaling applies to the square model only");
        }
        if self.lengths.is_some() && model != Model::Grid {
            return usage("--lengths applies to the grid model only");
        }
        let mut spec = InstanceSpec::new(model, size, seed);
        spec.scaling = self.scaling.unwrap_or_default();
        spec.edge_law = self.lengths.unwrap_or_default();
        spec.validate().map_err(|e| Usage(e.to_string()))?;
        Ok(spec)
    }

    fn load(&self) -> Result<Instance> {
        if let Some(path) = &self.graph_file {
            if self.n.is_some()
                || self.m.is_some()
                || self.scaling.is_some()
                || self.lengths.is_some()
            {
                return usage("--graph-file cannot be combined with model parameters");
            }
            let f =
                fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
            let graph = read_graph(BufReader::new(f))
                .map_err(|e| Usage(format!("{}: {e}", path.display())))?;
            return Ok(Instance {
                graph,
                points: None,
            });
        }
        Ok(self.spec()?.generate()?)
    }
}

#[derive(Args, Debug)]
struct WalkArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Start vertex
    #[arg(long, default_value_t = 0)]
    start: usize,
    /// Also report the tour length (walk plus the return leg to the start)
    #[arg(long)]
    tour: bool,
    /// Include the vertex sequence of every step's shortest path
    #[arg(long)]
    keep_paths: bool,
    /// Also write steps.csv (step,from,to,distance,cumulative) here
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoverArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Comma-separated radii; without it the whole profile is printed
    #[arg(long, value_delimiter = ',')]
    radii: Vec<f64>,
    /// exact (n <= 18), greedy (an upper bound), or auto
    #[arg(long, default_value = "auto")]
    method: String,
    /// Also write cover_profile.csv (r,N_hat) here when printing the profile
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Start vertex of the walk
    #[arg(long, default_value_t = 0)]
    start: usize,
    /// Comma-separated positive radii; default: 8 radii spread over the pairwise distances
    #[arg(long, value_delimiter = ',')]
    radii: Vec<f64>,
}

#[derive(Args, Debug)]
struct BaselineArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Start vertex of the shortest covering walk
    #[arg(long, default_value_t = 0)]
    start: usize,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// Experiment config file; without it the instance flags below are used
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(flatten)]
    instance: InstanceArgs,
    /// Number of random graphs (overrides the config)
    #[arg(long)]
    replicates: Option<usize>,
    /// Walks per graph from distinct random starts (overrides the config)
    #[arg(long)]
    starts: Option<usize>,
    /// Comma-separated statistics (overrides the config)
    #[arg(long, value_delimiter = ',')]
    statistics: Vec<Statistic>,
    /// Worker threads; results are identical for every value
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output directory (overrides the config's out_dir)
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FigureArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// walk_polyline, step_histogram, multi_start_overlay or cover_profile
    #[arg(long)]
    kind: FigureKind,
    /// Comma-separated start vertices (the overlay uses all, other kinds the first)
    #[arg(long, value_delimiter = ',')]
    starts: Vec<usize>,
    /// Histogram bin width; default one thirtieth of the longest step
    #[arg(long)]
    bin_width: Option<f64>,
    /// Also render an SVG for polyline figures
    #[arg(long)]
    svg: bool,
    /// Directory for the figure files
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Directory for graph.txt and points.csv
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
}

fn print_json(v: &Value) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    let f = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn check_radii(radii: &[f64]) -> Result<()> {
    match radii.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        Some(r) => usage(format!("radii must be positive and finite, got {r}")),
        None => Ok(()),
    }
}

fn check_start(inst: &Instance, start: usize) -> Result<()> {
    let n = inst.graph.n();
    if start >= n {
        return usage(format!(
            "--start {start} is out of range for a graph with {n} vertices"
        ));
    }
    Ok(())
}

fn walk(args: WalkArgs) -> Result<u8> {
    let inst = args.instance.load()?;
    check_start(&inst, args.start)?;
    let opts = WalkOptions {
        keep_paths: args.keep_paths,
        tour: args.tour,
    };
    let w = nuv_walk_with(&inst.graph, args.start, opts)?;
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir)?;
        w.write_steps_csv(create(&dir.join("steps.csv"))?)?;
    }
    let mut v = serde_json::to_value(&w)?;
    if let Some(t) = w.tour_length() {
        v["tour_length"] = json!(t);
    }
    print_json(&v)?;
    Ok(0)
}

fn profile_method(name: &str, n: usize) -> Result<ProfileMethod> {
    Ok(match name {
        "exact" => ProfileMethod::Exact,
        "greedy" => ProfileMethod::Greedy,
        "auto" if n <= EXACT_COVER_LIMIT => ProfileMethod::Exact,
        "auto" => ProfileMethod::Greedy,
        other => {
            return usage(format!(
                "unknown cover method '{other}' (expected exact, greedy or auto)"
            ))
        }
    })
}

fn cover(args: CoverArgs) -> Result<u8> {
    check_radii(&args.radii)?;
    let inst = args.instance.load()?;
    let method = profile_method(&args.method, inst.graph.n())?;
    if method == ProfileMethod::Exact && inst.graph.n() > EXACT_COVER_LIMIT {
        return usage(format!(
            "exact covers are limited to n <= {EXACT_COVER_LIMIT}; use --method greedy"
        ));
    }
    let d = all_pairs_distances(&inst.graph);
    if args.radii.is_empty() {
        let profile = cover_profile_from_distances(&d, method, &ProfileOptions::default())?;
        if let Some(dir) = &args.out_dir {
            fs::create_dir_all(dir)?;
            profile.write_csv(create(&dir.join("cover_profile.csv"))?)?;
        }
        print_json(&serde_json::to_value(&profile)?)?;
    } else {
        let covers = args
            .radii
            .iter()
            .map(|&r| match method {
                ProfileMethod::Exact => exact_cover(&d, r, EXACT_COVER_LIMIT),
                ProfileMethod::Greedy => greedy_cover(&d, r),
            })
            .collect::<nuv_core::Result<Vec<_>>>()?;
        print_json(&json!({ "covers": covers }))?;
    }
    Ok(0)
}

fn verify(args: VerifyArgs) -> Result<u8> {
    check_radii(&args.radii)?;
    let inst = args.instance.load()?;
    check_start(&inst, args.start)?;
    let d = all_pairs_distances(&inst.graph);
    let radii = if args.radii.is_empty() {
        default_radii(&d, 8)
    } else {
        args.radii
    };
    let w = nuv_walk(&inst.graph, args.start)?;
    let report = verify_with_walk(&d, &w, &radii, &VerifyOptions::default())?;
    print_json(&serde_json::to_value(&report)?)?;
    if report.pass {
        Ok(0)
    } else {
        eprintln!("error: a cover bound was violated; see the report on stdout");
        Ok(EXIT_FAILURE)
    }
}

fn baseline(args: BaselineArgs) -> Result<u8> {
    let inst = args.instance.load()?;
    check_start(&inst, args.start)?;
    let b = baselines(&inst.graph, args.start)?;
    if b.tsp_length.is_none() {
        eprintln!(
            "note: exact shortest covering walk skipped for n = {} > {}",
            inst.graph.n(),
            nuv_core::EXACT_TSP_LIMIT
        );
    }
    print_json(&serde_json::to_value(&b)?)?;
    Ok(0)
}

fn experiment(args: ExperimentArgs) -> Result<u8> {
    if args.workers == 0 {
        return usage("--workers must be at least 1");
    }
    let mut cfg = match &args.config {
        Some(path) => {
            let i = &args.instance;
            if i.model.is_some()
                || i.n.is_some()
                || i.m.is_some()
                || i.seed.is_some()
                || i.graph_file.is_some()
            {
                return usage("--config cannot be combined with instance flags");
            }
            ExperimentConfig::from_file(path).map_err(|e| match e {
                nuv_core::Error::Io(io) => {
                    anyhow::Error::new(io).context(format!("cannot read {}", path.display()))
                }
                other => Usage(format!("{}: {other}", path.display())).into(),
            })?
        }
        None => {
            if args.instance.graph_file.is_some() {
                return usage("experiments generate their graphs; --graph-file is not accepted");
            }
            ExperimentConfig::new(args.instance.spec()?)
        }
    };
    if let Some(r) = args.replicates {
        cfg.replicates = r;
    }
    if let Some(k) = args.starts {
        cfg.starts_per_graph = k;
    }
    if !args.statistics.is_empty() {
        cfg.statistics = args.statistics.clone();
    }
    if args.out_dir.is_some() {
        cfg.out_dir = args.out_dir.clone();
    }
    cfg.validate().map_err(|e| Usage(e.to_string()))?;

    let summary = run_experiment_with_workers(&cfg, args.workers)?;
    if let Some(dir) = &cfg.out_dir {
        for p in summary.write_outputs(dir)? {
            eprintln!("wrote {}", p.display());
        }
    }
    let mut v = serde_json::to_value(&summary)?;
    if let Value::Object(map) = &mut v {
        map.remove("replicates");
    }
    print_json(&v)?;
    for f in &summary.failed_statistics {
        eprintln!(
            "error: statistic '{}' not computed: {}",
            f.statistic, f.reason
        );
    }
    Ok(if summary.ok() { 0 } else { EXIT_FAILURE })
}

fn figure(args: FigureArgs) -> Result<u8> {
    if let Some(b) = args.bin_width {
        if !(b > 0.0 && b.is_finite()) {
            return usage(format!("--bin-width must be positive, got {b}"));
        }
    }
    let inst = args.instance.load()?;
    for &s in &args.starts {
        check_start(&inst, s)?;
    }
    if matches!(
        args.kind,
        FigureKind::WalkPolyline | FigureKind::MultiStartOverlay
    ) && inst.points.is_none()
    {
        return usage("walk polylines need coordinates; use --model square");
    }
    let req = FigureRequest {
        kind: args.kind,
        starts: args.starts,
        bin_width: args.bin_width,
        svg: args.svg,
    };
    let files = emit_figure_data(&inst, &req, &args.out_dir)?;
    print_json(&json!({ "files": files }))?;
    Ok(0)
}

fn gen(args: GenArgs) -> Result<u8> {
    if args.instance.graph_file.is_some() {
        bail!(Usage(
            "gen generates instances; --graph-file is not accepted".into()
        ));
    }
    let spec = args.instance.spec()?;
    let inst = spec.generate()?;
    fs::create_dir_all(&args.out_dir)?;
    let mut files = Vec::new();
    let graph_path = args.out_dir.join("graph.txt");
    let mut out = create(&graph_path)?;
    write_graph(&inst.graph, &mut out)?;
    out.flush()?;
    files.push(graph_path);
    if let Some(points) = &inst.points {
        let p = args.out_dir.join("points.csv");
        let mut out = create(&p)?;
        write_points_csv(points, &mut out)?;
        out.flush()?;
        files.push(p);
    }
    print_json(&json!({
        "instance": spec,
        "n": inst.graph.n(),
        "edges": inst.graph.edge_count(),
        "files": files,
    }))?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Walk(a) => walk(a),
        Command::Cover(a) => cover(a),
        Command::VerifyProp1(a) => verify(a),
        Command::Baseline(a) => baseline(a),
        Command::Experiment(a) => experiment(a),
        Command::Figure(a) => figure(a),
        Command::Gen(a) => gen(a),
    }
}

/// Input problems count as usage errors; everything else as failures.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<nuv_core::Error>() {
        Some(
            nuv_core::Error::InvalidParameter(_)
            | nuv_core::Error::InvalidVertex { .. }
            | nuv_core::Error::SizeLimit { .. }
            | nuv_core::Error::Parse { .. }
            | nuv_core::Error::MissingCoordinates(_),
        ) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
