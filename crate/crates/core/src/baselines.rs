//! Minimum spanning tree length and exact shortest covering walks, used
//! as reference points for the walk length.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{all_pairs_distances, shortest_path, DistanceMatrix, WeightedGraph};
use crate::walk::nuv_walk;

/// Largest vertex count accepted by the exact TSP dynamic programme.
pub const EXACT_TSP_LIMIT: usize = 15;

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
        true
    }
}

/// Kruskal's algorithm; equal lengths are taken in `(u, v)` order.
pub fn minimum_spanning_tree(g: &WeightedGraph) -> Vec<(usize, usize, f64)> {
    let mut edges: Vec<(usize, usize, f64)> = g.edges().collect();
    edges.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    let mut sets = DisjointSets::new(g.n());
    let mut tree = Vec::with_capacity(g.n().saturating_sub(1));
    for (u, v, l) in edges {
        if sets.union(u, v) {
            tree.push((u, v, l));
            if tree.len() + 1 == g.n() {
                break;
            }
        }
    }
    tree
}

pub fn mst_length(g: &WeightedGraph) -> f64 {
    minimum_spanning_tree(g).iter().map(|e| e.2).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TspResult {
    pub start: usize,
    /// Shortest walk from `start` visiting every vertex.
    pub length: f64,
    /// Visit order of that walk.
    pub order: Vec<usize>,
    /// The same walk expanded to graph edges.
    pub route: Vec<usize>,
    /// Shortest closed tour through every vertex (start independent).
    pub tour_length: f64,
}

/// Held-Karp over the shortest-path metric. Since a covering walk may
/// revisit vertices, its optimum is a shortest Hamiltonian path in the
/// metric closure.
pub fn exact_tsp_walk(g: &WeightedGraph, start: usize) -> Result<TspResult> {
    g.check_vertex(start)?;
    if g.n() > EXACT_TSP_LIMIT {
        return Err(Error::SizeLimit {
            what: "exact TSP",
            n: g.n(),
            limit: EXACT_TSP_LIMIT,
            hint: "the dynamic programme needs 2^n * n states",
        });
    }
    let d = all_pairs_distances(g);
    let (length, tour_length, order) = held_karp(&d, start);
    let mut route = vec![start];
    for pair in order.windows(2) {
        route.extend_from_slice(&shortest_path(g, pair[0], pair[1])?.path[1..]);
    }
    Ok(TspResult {
        start,
        length,
        order,
        route,
        tour_length,
    })
}

/// Returns `(walk length, tour length, walk order)`.
fn held_karp(d: &DistanceMatrix, start: usize) -> (f64, f64, Vec<usize>) {
    let n = d.n();
    if n == 1 {
        return (0.0, 0.0, vec![start]);
    }
    // the other vertices, re-indexed 0..k
    let others: Vec<usize> = (0..n).filter(|&v| v != start).collect();
    let k = others.len();
    let states = 1usize << k;
    let mut cost = vec![f64::INFINITY; states * k];
    let mut prev = vec![u8::MAX; states * k];
    for (j, &v) in others.iter().enumerate() {
        cost[(1 << j) * k + j] = d.get(start, v);
    }
    for mask in 1..states {
        for j in 0..k {
            if mask >> j & 1 == 0 {
                continue;
            }
            let base = cost[mask * k + j];
            if !base.is_finite() {
                continue;
            }
            for t in 0..k {
                if mask >> t & 1 == 1 {
                    continue;
                }
                let next = mask | 1 << t;
                let c = base + d.get(others[j], others[t]);
                let slot = next * k + t;
                // strict improvement, or a tie won by a smaller predecessor
                if c < cost[slot] || (c == cost[slot] && (j as u8) < prev[slot]) {
                    cost[slot] = c;
                    prev[slot] = j as u8;
                }
            }
        }
    }
    let full = states - 1;
    let mut best = (f64::INFINITY, 0);
    let mut tour = f64::INFINITY;
    for j in 0..k {
        let c = cost[full * k + j];
        if c < best.0 {
            best = (c, j);
        }
        tour = tour.min(c + d.get(others[j], start));
    }
    let mut order = Vec::with_capacity(n);
    let (mut mask, mut j) = (full, best.1);
    loop {
        order.push(others[j]);
        let p = prev[mask * k + j];
        mask &= !(1 << j);
        if p == u8::MAX {
            break;
        }
        j = p as usize;
    }
    order.push(start);
    order.reverse();
    (best.0, tour, order)
}

/// Walk length over the exact shortest covering walk from the same start.
pub fn nuv_tsp_ratio(g: &WeightedGraph, start: usize) -> Result<f64> {
    let tsp = exact_tsp_walk(g, start)?;
    let walk = nuv_walk(g, start)?;
    Ok(if tsp.length > 0.0 {
        walk.total_length / tsp.length
    } else {
        1.0
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaselineResult {
    pub mst_length: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tsp_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tsp_tour_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tsp_order: Option<Vec<usize>>,
}

/// MST length, plus the exact TSP walk from `start` when `n` allows it.
pub fn baselines(g: &WeightedGraph, start: usize) -> Result<BaselineResult> {
    let mst_length = mst_length(g);
    let tsp = if g.n() <= EXACT_TSP_LIMIT {
        Some(exact_tsp_walk(g, start)?)
    } else {
        g.check_vertex(start)?;
        None
    };
    Ok(BaselineResult {
        mst_length,
        tsp_length: tsp.as_ref().map(|t| t.length),
        tsp_tour_length: tsp.as_ref().map(|t| t.tour_length),
        tsp_order: tsp.map(|t| t.order),
    })
}
