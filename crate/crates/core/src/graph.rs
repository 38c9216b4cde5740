//! Undirected graphs with positive edge lengths and the shortest-path
//! machinery every other module is built on.
//!
//! Two storage layouts are supported. Sparse graphs keep a CSR adjacency
//! and are searched with a binary-heap Dijkstra. Complete graphs keep the
//! full `n x n` length matrix plus every row sorted by length; they are
//! searched by a lazy Dijkstra that only looks at the next-shortest edge
//! out of each settled vertex, which touches a small fraction of the
//! `n^2` edges on random instances.
//!
//! All searches settle vertices in `(distance, index)` order and, among
//! equally short routes into a vertex, prefer the smallest predecessor
//! index, so every query is a deterministic function of the graph.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
enum Repr {
    Sparse {
        offsets: Vec<usize>,
        adj: Vec<(u32, f64)>,
    },
    Dense {
        lengths: Vec<f64>,
        /// Row `u` holds the `n - 1` neighbours of `u` ordered by `(length, index)`.
        by_length: Vec<(f64, u32)>,
    },
}

/// An immutable, connected, undirected graph on vertices `0..n` with
/// strictly positive finite edge lengths.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    n: usize,
    edge_count: usize,
    repr: Repr,
    metric: bool,
}

/// A shortest route from a source to `target`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathResult {
    pub target: usize,
    pub distance: f64,
    /// Vertex sequence from the source to `target`, both inclusive.
    pub path: Vec<usize>,
}

fn check_length(u: usize, v: usize, length: f64) -> Result<()> {
    if length.is_finite() && length > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidLength { u, v, length })
    }
}

impl WeightedGraph {
    /// Builds a sparse graph from an undirected edge list.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut lists: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v, length) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::InvalidVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            check_length(u, v, length)?;
            lists[u].push((v as u32, length));
            lists[v].push((u as u32, length));
            edge_count += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut adj = Vec::with_capacity(2 * edge_count);
        offsets.push(0);
        for (u, mut list) in lists.into_iter().enumerate() {
            list.sort_by_key(|&(w, _)| w);
            if let Some(pair) = list.windows(2).find(|p| p[0].0 == p[1].0) {
                let v = pair[0].0 as usize;
                return Err(Error::ParallelEdge {
                    u: u.min(v),
                    v: u.max(v),
                });
            }
            adj.extend(list);
            offsets.push(adj.len());
        }
        let g = WeightedGraph {
            n,
            edge_count,
            repr: Repr::Sparse { offsets, adj },
            metric: false,
        };
        g.check_connected()?;
        Ok(g)
    }

    /// Builds a complete graph, calling `length(u, v)` once for every pair
    /// `u < v` in lexicographic order.
    pub fn complete_with<F>(n: usize, mut length: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> f64,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut lengths = vec![0.0; n * n];
        for u in 0..n {
            for v in u + 1..n {
                let l = length(u, v);
                check_length(u, v, l)?;
                lengths[u * n + v] = l;
                lengths[v * n + u] = l;
            }
        }
        let mut by_length = Vec::with_capacity(n * n.saturating_sub(1));
        for u in 0..n {
            let start = by_length.len();
            by_length.extend(
                (0..n)
                    .filter(|&v| v != u)
                    .map(|v| (lengths[u * n + v], v as u32)),
            );
            by_length[start..].sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        }
        Ok(WeightedGraph {
            n,
            edge_count: n * (n - 1) / 2,
            repr: Repr::Dense { lengths, by_length },
            metric: false,
        })
    }

    /// Complete graph on planar points with Euclidean lengths. Such a graph
    /// is a metric, so shortest routes are the direct edges and queries
    /// skip the search.
    pub fn euclidean(points: &[[f64; 2]]) -> Result<Self> {
        let mut g = Self::complete_with(points.len(), |u, v| {
            let (a, b) = (points[u], points[v]);
            (a[0] - b[0]).hypot(a[1] - b[1])
        })?;
        g.metric = true;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense { .. })
    }

    /// True when direct edge lengths are known to equal graph distances.
    pub fn is_metric(&self) -> bool {
        self.metric
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.n,
            })
        }
    }

    /// Length of the edge `{u, v}`, if present.
    pub fn length(&self, u: usize, v: usize) -> Option<f64> {
        if u >= self.n || v >= self.n || u == v {
            return None;
        }
        match &self.repr {
            Repr::Dense { lengths, .. } => Some(lengths[u * self.n + v]),
            Repr::Sparse { offsets, adj } => {
                let row = &adj[offsets[u]..offsets[u + 1]];
                row.binary_search_by_key(&(v as u32), |&(w, _)| w)
                    .ok()
                    .map(|i| row[i].1)
            }
        }
    }

    /// Neighbours of `u` with edge lengths, in increasing index order.
    pub fn neighbors(&self, u: usize) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        match &self.repr {
            Repr::Sparse { offsets, adj } => Box::new(
                adj[offsets[u]..offsets[u + 1]]
                    .iter()
                    .map(|&(w, l)| (w as usize, l)),
            ),
            Repr::Dense { lengths, .. } => {
                let n = self.n;
                Box::new(
                    (0..n)
                        .filter(move |&v| v != u)
                        .map(move |v| (v, lengths[u * n + v])),
                )
            }
        }
    }

    /// Every edge once, as `(u, v, length)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| v > u)
                .map(move |(v, l)| (u, v, l))
        })
    }

    fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for (v, _) in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(unreachable) => Err(Error::Disconnected { unreachable }),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Key {
    dist: f64,
    vertex: u32,
    pred: u32,
}

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.vertex.cmp(&other.vertex))
            .then(self.pred.cmp(&other.pred))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reusable single-source search state. Buffers are stamped with a
/// generation counter so consecutive searches do not pay an `O(n)` reset.
pub(crate) struct Searcher<'g> {
    g: &'g WeightedGraph,
    dist: Vec<f64>,
    pred: Vec<u32>,
    labelled: Vec<u32>,
    settled: Vec<u32>,
    cursor: Vec<u32>,
    generation: u32,
    heap: BinaryHeap<Reverse<Key>>,
}

impl<'g> Searcher<'g> {
    pub(crate) fn new(g: &'g WeightedGraph) -> Self {
        let n = g.n;
        Searcher {
            g,
            dist: vec![f64::INFINITY; n],
            pred: vec![NONE; n],
            labelled: vec![0; n],
            settled: vec![0; n],
            cursor: vec![0; n],
            generation: 0,
            heap: BinaryHeap::new(),
        }
    }

    fn next_generation(&mut self) {
        if self.generation == u32::MAX {
            self.labelled.fill(0);
            self.settled.fill(0);
            self.generation = 0;
        }
        self.generation += 1;
        self.heap.clear();
    }

    #[inline]
    fn is_settled(&self, v: usize) -> bool {
        self.settled[v] == self.generation
    }

    /// Runs a search from `source`, settling vertices in `(distance, index)`
    /// order until `stop` accepts a settled vertex (returned) or the graph
    /// is exhausted (`None`).
    pub(crate) fn run<F>(&mut self, source: usize, mut stop: F) -> Option<usize>
    where
        F: FnMut(usize) -> bool,
    {
        self.next_generation();
        match &self.g.repr {
            Repr::Sparse { offsets, adj } => {
                let (offsets, adj) = (offsets.as_slice(), adj.as_slice());
                self.label(source, 0.0);
                self.heap.push(Reverse(Key {
                    dist: 0.0,
                    vertex: source as u32,
                    pred: NONE,
                }));
                while let Some(Reverse(key)) = self.heap.pop() {
                    let v = key.vertex as usize;
                    if self.is_settled(v) {
                        continue;
                    }
                    self.settle(v, key);
                    if stop(v) {
                        return Some(v);
                    }
                    for &(w, l) in &adj[offsets[v]..offsets[v + 1]] {
                        let w = w as usize;
                        if self.is_settled(w) {
                            continue;
                        }
                        let nd = key.dist + l;
                        if self.labelled[w] != self.generation || nd <= self.dist[w] {
                            self.label(w, nd);
                            self.heap.push(Reverse(Key {
                                dist: nd,
                                vertex: w as u32,
                                pred: v as u32,
                            }));
                        }
                    }
                }
                None
            }
            Repr::Dense { by_length, .. } => {
                let row = self.g.n - 1;
                let by_length = by_length.as_slice();
                let root = Key {
                    dist: 0.0,
                    vertex: source as u32,
                    pred: NONE,
                };
                self.settle(source, root);
                if stop(source) {
                    return Some(source);
                }
                self.cursor[source] = 0;
                self.push_next(source, by_length, row);
                while let Some(Reverse(key)) = self.heap.pop() {
                    let (w, u) = (key.vertex as usize, key.pred as usize);
                    self.cursor[u] += 1;
                    if !self.is_settled(w) {
                        self.settle(w, key);
                        if stop(w) {
                            return Some(w);
                        }
                        self.cursor[w] = 0;
                        self.push_next(w, by_length, row);
                    }
                    self.push_next(u, by_length, row);
                }
                None
            }
        }
    }

    #[inline]
    fn label(&mut self, v: usize, d: f64) {
        self.labelled[v] = self.generation;
        self.dist[v] = d;
    }

    #[inline]
    fn settle(&mut self, v: usize, key: Key) {
        self.label(v, key.dist);
        self.settled[v] = self.generation;
        self.pred[v] = key.pred;
    }

    /// Pushes the shortest edge from settled `u` to a vertex not yet settled.
    #[inline]
    fn push_next(&mut self, u: usize, by_length: &[(f64, u32)], row: usize) {
        let base = u * row;
        let mut c = self.cursor[u] as usize;
        while c < row && self.is_settled(by_length[base + c].1 as usize) {
            c += 1;
        }
        self.cursor[u] = c as u32;
        if c < row {
            let (l, w) = by_length[base + c];
            self.heap.push(Reverse(Key {
                dist: self.dist[u] + l,
                vertex: w,
                pred: u as u32,
            }));
        }
    }

    /// Distance to `v` from the last search, if `v` was settled.
    pub(crate) fn distance(&self, v: usize) -> Option<f64> {
        self.is_settled(v).then(|| self.dist[v])
    }

    /// Route from the last source to settled `v`.
    pub(crate) fn path_to(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while self.pred[cur] != NONE {
            cur = self.pred[cur] as usize;
            path.push(cur);
        }
        path.reverse();
        path
    }
}

/// Distances from `source` to every vertex, always computed by search
/// (never via the metric shortcut).
pub fn single_source_distances(g: &WeightedGraph, source: usize) -> Result<Vec<f64>> {
    g.check_vertex(source)?;
    let mut s = Searcher::new(g);
    s.run(source, |_| false);
    Ok((0..g.n)
        .map(|v| s.distance(v).expect("connected graph"))
        .collect())
}

/// Minimum-length route from `source` to `target`.
///
/// The search always runs from the smaller endpoint so that
/// `d(u, v) == d(v, u)` holds bit-for-bit.
pub fn shortest_path(g: &WeightedGraph, source: usize, target: usize) -> Result<PathResult> {
    g.check_vertex(source)?;
    g.check_vertex(target)?;
    if source == target {
        return Ok(PathResult {
            target,
            distance: 0.0,
            path: vec![source],
        });
    }
    if g.metric {
        return Ok(PathResult {
            target,
            distance: g.length(source, target).expect("complete graph"),
            path: vec![source, target],
        });
    }
    let (from, to) = (source.min(target), source.max(target));
    let mut s = Searcher::new(g);
    s.run(from, |v| v == to);
    let distance = s.distance(to).expect("connected graph");
    let mut path = s.path_to(to);
    if from != source {
        path.reverse();
    }
    Ok(PathResult {
        target,
        distance,
        path,
    })
}

/// Repeated nearest-unvisited queries against one graph, sharing buffers.
pub struct NearestUnvisited<'g> {
    searcher: Searcher<'g>,
}

impl<'g> NearestUnvisited<'g> {
    pub fn new(g: &'g WeightedGraph) -> Self {
        NearestUnvisited {
            searcher: Searcher::new(g),
        }
    }

    /// The unvisited vertex closest to `source`, ties going to the smaller
    /// index. The search stops as soon as the first unvisited vertex is
    /// settled; every earlier settled vertex (so every interior vertex of the
    /// returned path) is visited.
    pub fn query(
        &mut self,
        source: usize,
        visited: &[bool],
        with_path: bool,
    ) -> Result<PathResult> {
        let g = self.searcher.g;
        g.check_vertex(source)?;
        if visited.len() != g.n {
            return Err(Error::InvalidParameter(format!(
                "visited mask has length {}, graph has {} vertices",
                visited.len(),
                g.n
            )));
        }
        if !visited[source] {
            return Err(Error::InvalidParameter(format!(
                "source {source} must be visited"
            )));
        }
        if g.metric {
            let Repr::Dense { lengths, .. } = &g.repr else {
                unreachable!("metric graphs are complete");
            };
            let row = &lengths[source * g.n..(source + 1) * g.n];
            let mut best: Option<(f64, usize)> = None;
            for (v, &l) in row.iter().enumerate() {
                if !visited[v] && best.is_none_or(|(bl, _)| l < bl) {
                    best = Some((l, v));
                }
            }
            let (distance, target) = best.ok_or(Error::AllVisited)?;
            return Ok(PathResult {
                target,
                distance,
                path: if with_path {
                    vec![source, target]
                } else {
                    Vec::new()
                },
            });
        }
        let target = self
            .searcher
            .run(source, |v| !visited[v])
            .ok_or(Error::AllVisited)?;
        Ok(PathResult {
            target,
            distance: self.searcher.distance(target).expect("settled"),
            path: if with_path {
                self.searcher.path_to(target)
            } else {
                Vec::new()
            },
        })
    }
}

/// One-off nearest-unvisited query; `visited` is a membership mask.
pub fn nearest_unvisited(g: &WeightedGraph, source: usize, visited: &[bool]) -> Result<PathResult> {
    NearestUnvisited::new(g).query(source, visited, true)
}

/// Symmetric `n x n` matrix of graph distances.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    /// Largest entry: the diameter.
    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// Sorted distinct off-diagonal values.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = (0..self.n)
            .flat_map(|u| (u + 1..self.n).map(move |v| (u, v)))
            .map(|(u, v)| self.get(u, v))
            .collect();
        vals.sort_unstable_by(f64::total_cmp);
        vals.dedup();
        vals
    }
}

/// Upper-triangle row `s` of the distance matrix: distances to `t > s`.
fn upper_row(g: &WeightedGraph, searcher: &mut Searcher<'_>, s: usize) -> Vec<f64> {
    if g.metric {
        return (s + 1..g.n)
            .map(|t| g.length(s, t).expect("complete"))
            .collect();
    }
    searcher.run(s, |_| false);
    (s + 1..g.n)
        .map(|t| searcher.distance(t).expect("connected graph"))
        .collect()
}

/// For a dense non-metric graph, the sparse subgraph of edges no longer
/// than `2 * ecc(0)`. Since `diam <= 2 * ecc(0)` and an edge on a shortest
/// path is no longer than that path, the subgraph has the same distances.
/// `None` when the graph is sparse or metric, or pruning would not help.
fn shortest_path_subgraph(g: &WeightedGraph) -> Option<WeightedGraph> {
    let Repr::Dense { by_length, .. } = &g.repr else {
        return None;
    };
    if g.metric || g.n < 3 {
        return None;
    }
    let mut searcher = Searcher::new(g);
    searcher.run(0, |_| false);
    let bound = 2.0
        * (0..g.n)
            .map(|v| searcher.distance(v).expect("complete graph"))
            .fold(0.0, f64::max);
    let per_vertex = g.n - 1;
    let mut edges = Vec::new();
    for u in 0..g.n {
        let row = &by_length[u * per_vertex..(u + 1) * per_vertex];
        for &(l, v) in row.iter().take_while(|e| e.0 <= bound) {
            if u < v as usize {
                edges.push((u, v as usize, l));
            }
        }
    }
    if edges.len() * 2 > g.edge_count {
        return None;
    }
    Some(WeightedGraph::from_edges(g.n, edges).expect("subgraph keeps every shortest path"))
}

/// All-pairs graph distances; entry `(u, v)` comes from the search rooted at
/// `min(u, v)`, matching [`shortest_path`] exactly.
pub fn all_pairs_distances(g: &WeightedGraph) -> DistanceMatrix {
    let n = g.n;
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map_init(|| Searcher::new(g), |searcher, s| upper_row(g, searcher, s))
        .collect();
    let mut data = vec![0.0; n * n];
    for (s, row) in rows.into_iter().enumerate() {
        for (k, d) in row.into_iter().enumerate() {
            let t = s + 1 + k;
            data[s * n + t] = d;
            data[t * n + s] = d;
        }
    }
    DistanceMatrix { n, data }
}

/// Largest graph distance, without materialising the matrix.
pub fn diameter(g: &WeightedGraph) -> f64 {
    if let Some(sub) = shortest_path_subgraph(g) {
        return diameter(&sub);
    }
    (0..g.n)
        .into_par_iter()
        .map_init(
            || Searcher::new(g),
            |searcher, s| upper_row(g, searcher, s).into_iter().fold(0.0, f64::max),
        )
        .reduce(|| 0.0, f64::max)
}
