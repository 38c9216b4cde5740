//! The nearest-unvisited-vertex walk.
//!
//! From the start the walk repeatedly moves along a shortest route to the
//! closest vertex it has not yet visited, until every vertex is visited.
//! By default the walk ends at the last new vertex; the tour variant also
//! records the length of the closing leg back to the start.

use std::io::Write;

use serde::Serialize;

use crate::cover::{CoverMethod, CoverResult};
use crate::error::{Error, Result};
use crate::graph::{shortest_path, NearestUnvisited, WeightedGraph};

#[derive(Clone, Copy, Debug, Default)]
pub struct WalkOptions {
    /// Keep the vertex route of every step (needed for overlap measures).
    pub keep_paths: bool,
    /// Also compute the closing leg back to the start.
    pub tour: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkResult {
    pub start: usize,
    /// Vertices in order of first visit; `order[0] == start`.
    pub order: Vec<usize>,
    /// `step_distances[i]` is the distance from `order[i]` to `order[i + 1]`.
    pub step_distances: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_paths: Option<Vec<Vec<usize>>>,
    pub total_length: f64,
    /// Distance from the last vertex back to the start, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub return_length: Option<f64>,
}

impl WalkResult {
    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Walk length up to each vertex in visit order (`prefix[0] == 0`,
    /// last entry equals `total_length`).
    pub fn prefix_lengths(&self) -> Vec<f64> {
        let mut acc = 0.0;
        std::iter::once(0.0)
            .chain(self.step_distances.iter().map(|d| {
                acc += d;
                acc
            }))
            .collect()
    }

    /// `rank[v]` is the position of `v` in the visit order.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            rank[v] = i;
        }
        rank
    }

    /// Step length leaving each vertex, indexed by vertex; zero for the
    /// last vertex of the walk.
    pub fn departure_distances(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.order.len()];
        for (i, &d) in self.step_distances.iter().enumerate() {
            out[self.order[i]] = d;
        }
        out
    }

    pub fn tour_length(&self) -> Option<f64> {
        self.return_length.map(|r| self.total_length + r)
    }

    /// One CSV row per step: `step,from,to,distance,cumulative`.
    pub fn write_steps_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "step,from,to,distance,cumulative")?;
        let prefix = self.prefix_lengths();
        for (i, &d) in self.step_distances.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                i + 1,
                self.order[i],
                self.order[i + 1],
                d,
                prefix[i + 1]
            )?;
        }
        Ok(())
    }
}

pub fn nuv_walk(g: &WeightedGraph, start: usize) -> Result<WalkResult> {
    nuv_walk_with(g, start, WalkOptions::default())
}

pub fn nuv_walk_with(g: &WeightedGraph, start: usize, opts: WalkOptions) -> Result<WalkResult> {
    g.check_vertex(start)?;
    let n = g.n();
    let mut visited = vec![false; n];
    visited[start] = true;
    let mut order = Vec::with_capacity(n);
    order.push(start);
    let mut step_distances = Vec::with_capacity(n.saturating_sub(1));
    let mut step_paths = opts
        .keep_paths
        .then(|| Vec::with_capacity(n.saturating_sub(1)));
    let mut total_length = 0.0;
    let mut search = NearestUnvisited::new(g);
    let mut current = start;
    for _ in 1..n {
        let step = search.query(current, &visited, opts.keep_paths)?;
        visited[step.target] = true;
        order.push(step.target);
        step_distances.push(step.distance);
        total_length += step.distance;
        if let Some(paths) = step_paths.as_mut() {
            paths.push(step.path);
        }
        current = step.target;
    }
    let return_length = if opts.tour {
        Some(shortest_path(g, current, start)?.distance)
    } else {
        None
    };
    Ok(WalkResult {
        start,
        order,
        step_distances,
        step_paths,
        total_length,
        return_length,
    })
}

/// Centres picked along the walk: the start, then each first vertex whose
/// walk length since the previous centre exceeds `r`. Every vertex lies
/// within walk length (hence graph distance) `r` of the preceding centre,
/// and at most `1 + L/r` centres are chosen.
pub fn walk_cover_selection(w: &WalkResult, r: f64) -> Result<CoverResult> {
    if r <= 0.0 || !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "cover radius must be positive and finite, got {r}"
        )));
    }
    let prefix = w.prefix_lengths();
    let mut centers = vec![w.order[0]];
    let mut anchor = 0.0;
    for (i, &z) in prefix.iter().enumerate().skip(1) {
        if z - anchor > r {
            centers.push(w.order[i]);
            anchor = z;
        }
    }
    Ok(CoverResult::new(r, centers, CoverMethod::WalkDerived))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Contiguous bins from the lowest to the highest occupied one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub bins: Vec<HistogramBin>,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.bins.iter().map(|b| b.count).sum()
    }
}

/// Histogram of step distances over bins `[k w, (k+1) w)`.
pub fn step_histogram(w: &WalkResult, bin_width: f64) -> Result<Histogram> {
    if bin_width <= 0.0 || !bin_width.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bin width must be positive and finite, got {bin_width}"
        )));
    }
    let idx: Vec<u64> = w
        .step_distances
        .iter()
        .map(|&d| (d / bin_width).floor() as u64)
        .collect();
    let (Some(&lo), Some(&hi)) = (idx.iter().min(), idx.iter().max()) else {
        return Ok(Histogram {
            bin_width,
            bins: Vec::new(),
        });
    };
    let mut counts = vec![0usize; (hi - lo + 1) as usize];
    for k in idx {
        counts[(k - lo) as usize] += 1;
    }
    let bins = counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| {
            let k = (lo + i as u64) as f64;
            HistogramBin {
                lo: k * bin_width,
                hi: (k + 1.0) * bin_width,
                count,
            }
        })
        .collect();
    Ok(Histogram { bin_width, bins })
}
