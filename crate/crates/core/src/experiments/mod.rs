//! Monte-Carlo harness: replicated walks on random instances, summary
//! statistics, start-sensitivity and overlap probes.
//!
//! Replicate `r` uses the instance seed `stream_seed(base, r)` and draws its
//! starts from a child stream of that seed, so the per-replicate records are
//! identical for any worker count.

mod config;
pub mod figures;
pub mod stats;

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

pub use config::{default_replicates, ExperimentConfig, Statistic};
pub use stats::{variance_decomposition, Moments, VarianceDecomposition};

use crate::baselines::{exact_tsp_walk, mst_length, EXACT_TSP_LIMIT};
use crate::cover::{
    cover_profile_from_distances, ProfileMethod, ProfileOptions, EXACT_COVER_LIMIT,
};
use crate::error::{Error, Result};
use crate::graph::{all_pairs_distances, diameter, WeightedGraph};
use crate::models::{Model, Scaling};
use crate::rng;
use crate::walk::{nuv_walk, nuv_walk_with, WalkOptions, WalkResult};

/// Stream index reserved for start sampling under a replicate seed.
const START_STREAM: u64 = 0x5354_4152_5453;

/// Largest graphs on which every start is walked for `start_ratio`.
pub const START_RATIO_LIMIT_SPARSE: usize = 2000;
pub const START_RATIO_LIMIT_DENSE: usize = 500;
/// Largest graphs on which `diameter` and `cover_profile` are computed.
pub const ALL_PAIRS_LIMIT: usize = 2000;
/// Breakpoints evaluated per greedy cover profile.
pub const PROFILE_BREAKPOINTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkRecord {
    pub start: usize,
    pub length: f64,
    pub normalized_length: f64,
}

/// Extremes of the walk length over every start of one graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StartSensitivity {
    pub max_length: f64,
    pub argmax: usize,
    pub min_length: f64,
    pub argmin: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub seed: u64,
    pub walks: Vec<WalkRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diameter: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mst_length: Option<f64>,
    /// Exact shortest covering walk from the first start.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tsp_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tsp_tour_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_sensitivity: Option<StartSensitivity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover_exponent: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatisticFailure {
    pub statistic: Statistic,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregate {
    pub mean: f64,
    pub sd: f64,
    /// Mean divided by the model's natural scale (`n`, or `log n` for the
    /// diameter).
    pub scaled_mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub vertex_count: usize,
    pub walks: usize,
    /// Walk length over all (graph, start) pairs.
    pub length: Moments,
    /// Mean times `n^{-1/2}` (unit square) or `n^{-1}` (all other cases).
    pub normalized_mean: f64,
    /// Standard deviation times `n^{-1/2}`; unscaled for the unit square.
    pub normalized_sd: f64,
    pub sd_over_mean: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variance_decomposition: Option<VarianceDecomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diameter: Option<Aggregate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mst: Option<Aggregate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tsp: Option<Aggregate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_ratio: Option<Moments>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover_exponent: Option<Moments>,
    pub failed_statistics: Vec<StatisticFailure>,
    pub replicates: Vec<ReplicateRecord>,
}

impl ExperimentSummary {
    pub fn all_lengths(&self) -> Vec<f64> {
        self.replicates
            .iter()
            .flat_map(|r| r.walks.iter().map(|w| w.length))
            .collect()
    }

    /// Walk lengths grouped by graph.
    pub fn lengths_by_graph(&self) -> Vec<Vec<f64>> {
        self.replicates
            .iter()
            .map(|r| r.walks.iter().map(|w| w.length).collect())
            .collect()
    }

    pub fn ok(&self) -> bool {
        self.failed_statistics.is_empty()
    }

    /// `replicate,seed,start,L,normalized_L`, one row per walk.
    pub fn write_records_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "replicate,seed,start,L,normalized_L")?;
        for r in &self.replicates {
            for w in &r.walks {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.replicate, r.seed, w.start, w.length, w.normalized_length
                )?;
            }
        }
        Ok(())
    }

    /// Writes `records.csv` and `summary.json` into `dir`.
    pub fn write_outputs(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let records = dir.join("records.csv");
        self.write_records_csv(std::io::BufWriter::new(fs::File::create(&records)?))?;
        let summary = dir.join("summary.json");
        let mut f = std::io::BufWriter::new(fs::File::create(&summary)?);
        serde_json::to_writer_pretty(&mut f, self)?;
        writeln!(f)?;
        Ok(vec![records, summary])
    }
}

/// Precondition for one statistic on this configuration.
fn statistic_precondition(cfg: &ExperimentConfig, s: Statistic) -> Option<String> {
    let n = cfg.instance.vertex_count();
    let dense = matches!(cfg.instance.model, Model::Square | Model::MeanField);
    match s {
        Statistic::VarianceDecomposition if cfg.replicates < 2 || cfg.starts_per_graph < 2 => {
            Some(format!(
                "needs replicates >= 2 and starts >= 2, got {} and {}",
                cfg.replicates, cfg.starts_per_graph
            ))
        }
        Statistic::Tsp if n > EXACT_TSP_LIMIT => Some(format!(
            "exact TSP limited to n <= {EXACT_TSP_LIMIT}, got n = {n}"
        )),
        Statistic::StartRatio => {
            let limit = if dense {
                START_RATIO_LIMIT_DENSE
            } else {
                START_RATIO_LIMIT_SPARSE
            };
            (n > limit)
                .then(|| format!("walks from every start limited to n <= {limit}, got n = {n}"))
        }
        Statistic::Diameter | Statistic::CoverProfile if n > ALL_PAIRS_LIMIT => Some(format!(
            "all-pairs distances limited to n <= {ALL_PAIRS_LIMIT}, got n = {n}"
        )),
        _ => None,
    }
}

/// Walk length from every start of `g`.
pub fn start_sensitivity(g: &WeightedGraph) -> Result<StartSensitivity> {
    let lengths: Vec<f64> = (0..g.n())
        .into_par_iter()
        .map(|s| nuv_walk(g, s).map(|w| w.total_length))
        .collect::<Result<_>>()?;
    let mut argmax = 0;
    let mut argmin = 0;
    for (v, &l) in lengths.iter().enumerate() {
        if l > lengths[argmax] {
            argmax = v;
        }
        if l < lengths[argmin] {
            argmin = v;
        }
    }
    let (max_length, min_length) = (lengths[argmax], lengths[argmin]);
    Ok(StartSensitivity {
        max_length,
        argmax,
        min_length,
        argmin,
        ratio: if min_length > 0.0 {
            max_length / min_length
        } else {
            1.0
        },
    })
}

fn edge_key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Share of walk `a`'s length spent on edges that walk `b` also traverses.
/// Both walks must keep their step paths.
pub fn overlap_of_walks(g: &WeightedGraph, a: &WalkResult, b: &WalkResult) -> Result<f64> {
    let (pa, pb) = match (&a.step_paths, &b.step_paths) {
        (Some(pa), Some(pb)) => (pa, pb),
        _ => return Err(Error::PathsNotRetained),
    };
    let used_by_b: HashSet<(usize, usize)> = pb
        .iter()
        .flat_map(|p| p.windows(2).map(|e| edge_key(e[0], e[1])))
        .collect();
    let mut shared = 0.0;
    let mut total = 0.0;
    for e in pa.iter().flat_map(|p| p.windows(2)) {
        let l = g.length(e[0], e[1]).expect("step paths follow graph edges");
        total += l;
        if used_by_b.contains(&edge_key(e[0], e[1])) {
            shared += l;
        }
    }
    Ok(if total > 0.0 { shared / total } else { 1.0 })
}

pub fn overlap_fraction(g: &WeightedGraph, start_a: usize, start_b: usize) -> Result<f64> {
    let opts = WalkOptions {
        keep_paths: true,
        tour: false,
    };
    let a = nuv_walk_with(g, start_a, opts)?;
    let b = nuv_walk_with(g, start_b, opts)?;
    overlap_of_walks(g, &a, &b)
}

fn draw_starts(seed: u64, n: usize, k: usize) -> Vec<usize> {
    let mut r = rng::stream(rng::stream_seed(seed, START_STREAM));
    if k <= n {
        rng::sample_without_replacement(&mut r, n, k)
    } else {
        (0..k).map(|_| rng::uniform_index(&mut r, n)).collect()
    }
}

fn run_replicate(
    cfg: &ExperimentConfig,
    active: &[Statistic],
    replicate: usize,
) -> Result<ReplicateRecord> {
    let seed = rng::stream_seed(cfg.instance.seed, replicate as u64);
    let spec = cfg.instance.with_seed(seed);
    let instance = spec.generate()?;
    let g = &instance.graph;
    let normalizer = spec.normalizer();
    let starts = draw_starts(seed, g.n(), cfg.starts_per_graph);
    let walks = starts
        .iter()
        .map(|&s| {
            let w = nuv_walk(g, s)?;
            Ok(WalkRecord {
                start: s,
                length: w.total_length,
                normalized_length: w.total_length * normalizer,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let wants = |s: Statistic| active.contains(&s);

    let tsp = if wants(Statistic::Tsp) {
        Some(exact_tsp_walk(g, starts[0])?)
    } else {
        None
    };
    let cover_exponent = if wants(Statistic::CoverProfile) {
        let d = all_pairs_distances(g);
        let method = if g.n() <= EXACT_COVER_LIMIT {
            ProfileMethod::Exact
        } else {
            ProfileMethod::Greedy
        };
        let diam = d.max();
        let profile = cover_profile_from_distances(
            &d,
            method,
            &ProfileOptions {
                max_radius: Some(diam / 2.0),
                max_breakpoints: Some(PROFILE_BREAKPOINTS),
                exact_limit: None,
            },
        )?;
        // fit over radii between the typical step scale and a quarter of the diameter
        let nn_scale = diam / g.n() as f64;
        profile.fitted_exponent(nn_scale, diam / 4.0)
    } else {
        None
    };
    Ok(ReplicateRecord {
        replicate,
        seed,
        walks,
        diameter: wants(Statistic::Diameter).then(|| diameter(g)),
        mst_length: wants(Statistic::Mst).then(|| mst_length(g)),
        tsp_length: tsp.as_ref().map(|t| t.length),
        tsp_tour_length: tsp.as_ref().map(|t| t.tour_length),
        start_sensitivity: if wants(Statistic::StartRatio) {
            Some(start_sensitivity(g)?)
        } else {
            None
        },
        cover_exponent,
    })
}

fn aggregate(values: &[f64], scale: f64) -> Aggregate {
    let m = Moments::of(values);
    Aggregate {
        mean: m.mean,
        sd: m.sd,
        scaled_mean: m.mean / scale,
    }
}

/// Runs the experiment on the current rayon pool.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    let mut failed = Vec::new();
    let mut active = Vec::new();
    for &s in &cfg.statistics {
        match statistic_precondition(cfg, s) {
            Some(reason) => failed.push(StatisticFailure {
                statistic: s,
                reason,
            }),
            None => active.push(s),
        }
    }
    let replicates = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| run_replicate(cfg, &active, r))
        .collect::<Result<Vec<_>>>()?;
    summarize(cfg.clone(), &active, failed, replicates)
}

/// Runs the experiment on a dedicated pool of `workers` threads.
pub fn run_experiment_with_workers(
    cfg: &ExperimentConfig,
    workers: usize,
) -> Result<ExperimentSummary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_experiment(cfg))
}

/// Aggregates per-replicate records. Everything in the summary besides the
/// records themselves is recomputed here from them.
pub fn summarize(
    config: ExperimentConfig,
    active: &[Statistic],
    failed_statistics: Vec<StatisticFailure>,
    replicates: Vec<ReplicateRecord>,
) -> Result<ExperimentSummary> {
    let n = config.instance.vertex_count();
    let lengths: Vec<f64> = replicates
        .iter()
        .flat_map(|r| r.walks.iter().map(|w| w.length))
        .collect();
    let length = Moments::of(&lengths);
    let normalizer = config.instance.normalizer();
    let sd_normalizer = match (config.instance.model, config.instance.scaling) {
        (Model::Square, Scaling::Unit) => 1.0,
        _ => (n as f64).sqrt().recip(),
    };
    let wants = |s: Statistic| active.contains(&s);
    let variance_decomposition = if wants(Statistic::VarianceDecomposition) {
        let groups: Vec<Vec<f64>> = replicates
            .iter()
            .map(|r| r.walks.iter().map(|w| w.length).collect())
            .collect();
        Some(variance_decomposition(&groups)?)
    } else {
        None
    };
    let collect = |f: &dyn Fn(&ReplicateRecord) -> Option<f64>| -> Vec<f64> {
        replicates.iter().filter_map(f).collect()
    };
    let nonempty = |v: Vec<f64>| (!v.is_empty()).then_some(v);
    let diameter = nonempty(collect(&|r| r.diameter))
        .map(|v| aggregate(&v, (n as f64).ln().max(f64::MIN_POSITIVE)));
    let mst = nonempty(collect(&|r| r.mst_length)).map(|v| aggregate(&v, n as f64));
    let tsp = nonempty(collect(&|r| r.tsp_length)).map(|v| aggregate(&v, n as f64));
    let start_ratio = nonempty(collect(&|r| r.start_sensitivity.as_ref().map(|s| s.ratio)))
        .map(|v| Moments::of(&v));
    let cover_exponent = nonempty(collect(&|r| r.cover_exponent)).map(|v| Moments::of(&v));

    Ok(ExperimentSummary {
        vertex_count: n,
        walks: lengths.len(),
        normalized_mean: length.mean * normalizer,
        normalized_sd: length.sd * sd_normalizer,
        sd_over_mean: length.sd / length.mean,
        length,
        variance_decomposition,
        diameter,
        mst,
        tsp,
        start_ratio,
        cover_exponent,
        failed_statistics,
        replicates,
        config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{gen_linear, InstanceSpec};

    #[test]
    fn overlap_basics() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 3.0)]).unwrap();
        assert_eq!(overlap_fraction(&g, 0, 1).unwrap(), 1.0);
        assert_eq!(overlap_fraction(&g, 1, 0).unwrap(), 1.0);
        let g = gen_linear(10).unwrap();
        assert_eq!(overlap_fraction(&g, 3, 3).unwrap(), 1.0);
        let w = nuv_walk(&g, 0).unwrap();
        assert!(matches!(
            overlap_of_walks(&g, &w, &w),
            Err(Error::PathsNotRetained)
        ));
    }

    #[test]
    fn overlap_on_star_with_distinct_arms() {
        // star centred at 0; arms 1,2,3 with lengths 1,2,3
        let g = WeightedGraph::from_edges(4, [(0, 1, 1.0), (0, 2, 2.0), (0, 3, 3.0)]).unwrap();
        // from 0: 1, back to 2 via 0, back to 3 via 0 -> every edge used
        // from 3: 0 -> 1 -> 2, walk of 3 + 1 + 3 = 7 over all edges
        let f = overlap_fraction(&g, 0, 3).unwrap();
        assert_eq!(f, 1.0);
    }

    #[test]
    fn start_sensitivity_on_linear_graph() {
        let g = gen_linear(50).unwrap();
        let s = start_sensitivity(&g).unwrap();
        // cheapest from either end (one sweep), dearest from vertex 1
        let sweep: f64 = g.edges().map(|e| e.2).sum();
        assert!((s.min_length - sweep).abs() < 1e-9);
        assert!(s.argmin == 0 || s.argmin == 49);
        assert_eq!(s.argmax, 1);
        assert!(s.ratio > 1.8 && s.ratio < 2.0, "{s:?}");
    }

    #[test]
    fn nearly_constant_complete_graph_has_ratio_near_one() {
        let eps = 1e-6;
        let g = WeightedGraph::complete_with(30, |u, v| {
            1.0 + eps * ((u * 31 + v * 17) % 23) as f64 / 23.0
        })
        .unwrap();
        let s = start_sensitivity(&g).unwrap();
        assert!(s.ratio < 1.0 + 2.0 * eps, "{s:?}");
    }

    #[test]
    fn preconditions_are_reported_not_fatal() {
        let cfg = ExperimentConfig::new(InstanceSpec::new(Model::Grid, 5, 1))
            .with_replicates(3)
            .with_statistics(&[
                Statistic::Length,
                Statistic::Tsp,
                Statistic::VarianceDecomposition,
            ]);
        let s = run_experiment(&cfg).unwrap();
        let failed: Vec<_> = s.failed_statistics.iter().map(|f| f.statistic).collect();
        assert_eq!(
            failed,
            vec![Statistic::Tsp, Statistic::VarianceDecomposition]
        );
        assert!(!s.ok());
        assert_eq!(s.walks, 3);
    }

    #[test]
    fn summary_is_recomputable_from_records() {
        let cfg = ExperimentConfig::new(InstanceSpec::new(Model::MeanField, 30, 5))
            .with_replicates(6)
            .with_starts(3)
            .with_statistics(&Statistic::ALL);
        let s = run_experiment(&cfg).unwrap();
        assert!(s
            .failed_statistics
            .iter()
            .all(|f| f.statistic == Statistic::Tsp));
        let lengths = s.all_lengths();
        assert_eq!(lengths.len(), 18);
        assert_eq!(Moments::of(&lengths), s.length);
        assert_eq!(s.normalized_mean, s.length.mean / 30.0);
        let v = s.variance_decomposition.as_ref().unwrap();
        assert_eq!(v, &variance_decomposition(&s.lengths_by_graph()).unwrap());
        assert!(s.diameter.is_some() && s.mst.is_some() && s.start_ratio.is_some());
        for r in &s.replicates {
            let starts: HashSet<usize> = r.walks.iter().map(|w| w.start).collect();
            assert_eq!(starts.len(), 3, "starts drawn without replacement");
        }
        let rebuilt = summarize(
            s.config.clone(),
            &cfg.statistics,
            s.failed_statistics.clone(),
            s.replicates.clone(),
        )
        .unwrap();
        assert_eq!(rebuilt, s);
    }

    #[test]
    fn more_starts_than_vertices_samples_with_replacement() {
        let cfg = ExperimentConfig::new(InstanceSpec::new(Model::Linear, 3, 0))
            .with_replicates(1)
            .with_starts(7);
        let s = run_experiment(&cfg).unwrap();
        assert_eq!(s.replicates[0].walks.len(), 7);
    }

    #[test]
    fn records_csv_layout() {
        let cfg = ExperimentConfig::new(InstanceSpec::new(Model::Linear, 4, 9)).with_replicates(2);
        let s = run_experiment(&cfg).unwrap();
        let mut buf = Vec::new();
        s.write_records_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "replicate,seed,start,L,normalized_L");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,"));
    }
}
