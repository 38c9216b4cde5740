//! Independent reference implementations shared by the integration and
//! acceptance tests. Nothing here calls the search code under test: graph
//! distances come from Floyd-Warshall over the edge list.

#![allow(dead_code, clippy::needless_range_loop)]

use nuv_core::rng;
use nuv_core::{gen_grid, gen_mean_field, gen_square, Scaling, WalkResult, WeightedGraph};

/// All-pairs distances by Floyd-Warshall.
pub fn floyd_warshall(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for (u, v, l) in g.edges() {
        d[u][v] = l;
        d[v][u] = l;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Walk by the definition: from the current vertex, move to the unvisited
/// vertex at least distance, ties to the smallest index.
pub fn brute_force_walk(d: &[Vec<f64>], start: usize) -> (Vec<usize>, f64) {
    let n = d.len();
    let mut visited = vec![false; n];
    visited[start] = true;
    let mut order = vec![start];
    let mut total = 0.0;
    let mut cur = start;
    for _ in 1..n {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if !visited[v] && best.is_none_or(|b| d[cur][v] < d[cur][b]) {
                best = Some(v);
            }
        }
        let next = best.unwrap();
        total += d[cur][next];
        visited[next] = true;
        order.push(next);
        cur = next;
    }
    (order, total)
}

/// Shortest walk from `start` through every vertex, by trying every order
/// of the remaining vertices on the metric closure.
pub fn factorial_tsp(d: &[Vec<f64>], start: usize) -> f64 {
    fn go(d: &[Vec<f64>], cur: usize, rest: &mut Vec<usize>, acc: f64, best: &mut f64) {
        if rest.is_empty() {
            *best = best.min(acc);
            return;
        }
        for i in 0..rest.len() {
            let v = rest.swap_remove(i);
            go(d, v, rest, acc + d[cur][v], best);
            rest.push(v);
            let last = rest.len() - 1;
            rest.swap(i, last);
        }
    }
    let mut rest: Vec<usize> = (0..d.len()).filter(|&v| v != start).collect();
    let mut best = f64::INFINITY;
    go(d, start, &mut rest, 0.0, &mut best);
    best
}

/// Random connected sparse graph: a random tree plus extra edges. Lengths
/// are Exp(1), or integers in 1..=3 (to force ties) when `integer` is set.
pub fn random_sparse_graph(seed: u64, n: usize, integer: bool) -> WeightedGraph {
    let mut r = rng::stream(seed);
    let length = |r: &mut rng::StreamRng| {
        if integer {
            (1 + rng::uniform_index(r, 3)) as f64
        } else {
            rng::exponential(r, 1.0)
        }
    };
    let mut present = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng::uniform_index(&mut r, v);
        present[u][v] = true;
        edges.push((u, v, length(&mut r)));
    }
    let extra = rng::uniform_index(&mut r, n + 1);
    for _ in 0..extra {
        let u = rng::uniform_index(&mut r, n);
        let v = rng::uniform_index(&mut r, n);
        let (u, v) = (u.min(v), u.max(v));
        if u != v && !present[u][v] {
            present[u][v] = true;
            edges.push((u, v, length(&mut r)));
        }
    }
    WeightedGraph::from_edges(n, edges).unwrap()
}

/// The model a random instance was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Sparse,
    SparseTies,
    MeanField,
    Square,
    Grid,
}

pub const FAMILIES: [Family; 5] = [
    Family::Sparse,
    Family::SparseTies,
    Family::MeanField,
    Family::Square,
    Family::Grid,
];

/// A random instance of the family with about `n` vertices (grids round
/// down to a square side of at least 2).
pub fn instance(family: Family, seed: u64, n: usize) -> WeightedGraph {
    match family {
        Family::Sparse => random_sparse_graph(seed, n, false),
        Family::SparseTies => random_sparse_graph(seed, n, true),
        Family::MeanField => gen_mean_field(n, seed).unwrap(),
        Family::Square => gen_square(n, seed, Scaling::Unit).unwrap().graph,
        Family::Grid => gen_grid(((n as f64).sqrt() as usize).max(2), seed).unwrap(),
    }
}

/// Pairs whose members are each other's unique nearest vertex.
pub fn mutual_nearest_pairs(d: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let n = d.len();
    let nearest: Vec<Option<usize>> = (0..n)
        .map(|u| {
            let mut others: Vec<usize> = (0..n).filter(|&v| v != u).collect();
            others.sort_by(|&a, &b| d[u][a].total_cmp(&d[u][b]));
            match others.as_slice() {
                [a] => Some(*a),
                [a, b, ..] if d[u][*a] < d[u][*b] => Some(*a),
                _ => None,
            }
        })
        .collect();
    (0..n)
        .filter_map(|u| nearest[u].map(|v| (u, v)))
        .filter(|&(u, v)| u < v && nearest[v] == Some(u))
        .collect()
}

/// Structural facts every walk must satisfy: mutual nearest neighbours are
/// visited back to back, and every step path only passes through vertices
/// that were already visited.
pub fn structural_violations(d: &[Vec<f64>], w: &WalkResult) -> Vec<String> {
    let mut out = Vec::new();
    let n = w.order.len();
    let mut rank = vec![0; n];
    for (i, &v) in w.order.iter().enumerate() {
        rank[v] = i;
    }
    for (u, v) in mutual_nearest_pairs(d) {
        if rank[u].abs_diff(rank[v]) != 1 {
            out.push(format!(
                "mutual nearest pair ({u}, {v}) at ranks {} and {}",
                rank[u], rank[v]
            ));
        }
    }
    if let Some(paths) = &w.step_paths {
        for (i, p) in paths.iter().enumerate() {
            if p.first() != Some(&w.order[i]) || p.last() != Some(&w.order[i + 1]) {
                out.push(format!("step {i} path {p:?} has wrong endpoints"));
            }
            for &x in &p[1..p.len() - 1] {
                if rank[x] > i {
                    out.push(format!("step {i} passes unvisited vertex {x}"));
                }
            }
        }
    }
    out
}

/// Relative closeness for lengths summed in different orders.
pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}
