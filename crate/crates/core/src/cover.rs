//! Ball covers of a graph and the two-sided relation between covering
//! numbers and the walk length.
//!
//! `N(r)` is the least number of radius-`r` balls whose union is the whole
//! vertex set. For every walk length `L` and every `r > 0`,
//! `N(r) <= 1 + L/r`, and conversely `L <= 2 * integral_0^{diam/2} N(r) dr`.
//! The verifier here checks both, plus the per-ball fact underlying the
//! second one: inside any ball `B(v, r)` at most one vertex has a departing
//! walk step longer than `2r`.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{all_pairs_distances, DistanceMatrix, WeightedGraph};
use crate::walk::{nuv_walk, walk_cover_selection, WalkResult};

/// Largest vertex count accepted by [`exact_cover_number`] by default.
pub const EXACT_COVER_LIMIT: usize = 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverMethod {
    Exact,
    Greedy,
    WalkDerived,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverResult {
    pub radius: f64,
    pub centers: Vec<usize>,
    pub size: usize,
    pub method: CoverMethod,
}

impl CoverResult {
    pub(crate) fn new(radius: f64, centers: Vec<usize>, method: CoverMethod) -> Self {
        CoverResult {
            radius,
            size: centers.len(),
            centers,
            method,
        }
    }

    /// First vertex farther than `radius` from every centre, if any.
    pub fn uncovered(&self, d: &DistanceMatrix) -> Option<usize> {
        (0..d.n()).find(|&v| self.centers.iter().all(|&c| d.get(c, v) > self.radius))
    }

    pub fn covers(&self, d: &DistanceMatrix) -> bool {
        self.uncovered(d).is_none()
    }

    fn verified(self, d: &DistanceMatrix) -> Self {
        if let Some(v) = self.uncovered(d) {
            panic!(
                "{:?} cover of radius {} misses vertex {v}",
                self.method, self.radius
            );
        }
        self
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r >= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "radius must be finite and non-negative, got {r}"
        )))
    }
}

/// Minimum cover by exhaustive search; refuses graphs above [`EXACT_COVER_LIMIT`].
pub fn exact_cover_number(g: &WeightedGraph, r: f64) -> Result<CoverResult> {
    exact_cover_checked(g.n(), EXACT_COVER_LIMIT)?;
    exact_cover(&all_pairs_distances(g), r, EXACT_COVER_LIMIT)
}

fn exact_cover_checked(n: usize, limit: usize) -> Result<()> {
    if n > limit || n > 64 {
        return Err(Error::SizeLimit {
            what: "exact cover number",
            n,
            limit: limit.min(64),
            hint: "use the greedy cover for larger graphs",
        });
    }
    Ok(())
}

fn ball_masks(d: &DistanceMatrix, r: f64) -> Vec<u64> {
    (0..d.n())
        .map(|c| {
            d.row(c)
                .iter()
                .enumerate()
                .filter(|&(_, &x)| x <= r)
                .fold(0u64, |m, (v, _)| m | (1 << v))
        })
        .collect()
}

/// Minimum cover from a distance matrix. Candidate sizes are tried in
/// increasing order and centre sets in lexicographic order, so the result
/// is the lexicographically first minimum cover.
pub fn exact_cover(d: &DistanceMatrix, r: f64, limit: usize) -> Result<CoverResult> {
    check_radius(r)?;
    let n = d.n();
    exact_cover_checked(n, limit)?;
    let balls = ball_masks(d, r);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    fn search(
        balls: &[u64],
        full: u64,
        next: usize,
        covered: u64,
        budget: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if covered == full {
            return true;
        }
        if budget == 0 {
            return false;
        }
        let lowest = (!covered & full).trailing_zeros() as usize;
        // the lowest uncovered vertex needs a centre at index >= next
        let last = match (next..balls.len())
            .rev()
            .find(|&c| balls[c] >> lowest & 1 == 1)
        {
            Some(c) => c,
            None => return false,
        };
        for c in next..=last {
            chosen.push(c);
            if search(balls, full, c + 1, covered | balls[c], budget - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen = Vec::new();
    for k in 1..=n {
        if search(&balls, full, 0, 0, k, &mut chosen) {
            return Ok(CoverResult::new(r, chosen, CoverMethod::Exact).verified(d));
        }
    }
    unreachable!("every vertex covers itself");
}

pub fn greedy_cover_number(g: &WeightedGraph, r: f64) -> Result<CoverResult> {
    greedy_cover(&all_pairs_distances(g), r)
}

/// Greedy cover: repeatedly take the vertex whose ball holds the most
/// uncovered vertices, ties to the smallest index.
pub fn greedy_cover(d: &DistanceMatrix, r: f64) -> Result<CoverResult> {
    check_radius(r)?;
    let n = d.n();
    let balls: Vec<Vec<u32>> = (0..n)
        .map(|c| {
            d.row(c)
                .iter()
                .enumerate()
                .filter(|&(_, &x)| x <= r)
                .map(|(v, _)| v as u32)
                .collect()
        })
        .collect();
    // balls are symmetric: c covers v iff v covers c
    let mut gain: Vec<usize> = balls.iter().map(Vec::len).collect();
    let mut covered = vec![false; n];
    let mut remaining = n;
    let mut centers = Vec::new();
    while remaining > 0 {
        let best = (0..n)
            .max_by(|&a, &b| gain[a].cmp(&gain[b]).then(b.cmp(&a)))
            .expect("non-empty graph");
        centers.push(best);
        for &v in &balls[best] {
            let v = v as usize;
            if !covered[v] {
                covered[v] = true;
                remaining -= 1;
                for &c in &balls[v] {
                    gain[c as usize] -= 1;
                }
            }
        }
    }
    Ok(CoverResult::new(r, centers, CoverMethod::Greedy).verified(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMethod {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ProfileOptions {
    /// Only evaluate breakpoints up to this radius.
    pub max_radius: Option<f64>,
    /// Evaluate at most this many breakpoints (evenly spaced in rank).
    /// Dropping breakpoints keeps the profile an upper bound on `N(r)`,
    /// since a cover at radius `r` is still a cover at every larger radius.
    pub max_breakpoints: Option<usize>,
    /// Vertex limit for exact evaluation; defaults to [`EXACT_COVER_LIMIT`].
    pub exact_limit: Option<usize>,
}

/// Right-continuous step function `r -> N_hat(r)`, constant on
/// `[radii[i], radii[i + 1])` and equal to `counts.last()` beyond.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverProfile {
    pub method: ProfileMethod,
    pub radii: Vec<f64>,
    /// Covering numbers as evaluated at each radius.
    pub raw_counts: Vec<usize>,
    /// Non-increasing envelope: `counts[i] = min(raw_counts[..=i])`.
    pub counts: Vec<usize>,
}

impl CoverProfile {
    pub fn value_at(&self, r: f64) -> usize {
        let i = self.radii.partition_point(|&b| b <= r);
        self.counts[i.saturating_sub(1)]
    }

    /// Exact integral of the step function over `[0, upper]`.
    pub fn integral(&self, upper: f64) -> f64 {
        let mut total = 0.0;
        for (i, (&lo, &count)) in self.radii.iter().zip(&self.counts).enumerate() {
            if lo >= upper {
                break;
            }
            let hi = self.radii.get(i + 1).map_or(upper, |&b| b.min(upper));
            total += count as f64 * (hi - lo);
        }
        total
    }

    /// Least-squares slope of `-log N(r)` against `log r` over breakpoints in
    /// `(lo, hi)`; reported as a descriptive dimension estimate only.
    pub fn fitted_exponent(&self, lo: f64, hi: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .radii
            .iter()
            .zip(&self.counts)
            .filter(|&(&r, _)| r > lo && r < hi && r > 0.0)
            .map(|(&r, &c)| (r.ln(), (c as f64).ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        (sxx > 0.0).then(|| -sxy / sxx)
    }

    /// CSV with header `r,N_hat`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "r,N_hat")?;
        for (r, c) in self.radii.iter().zip(&self.counts) {
            writeln!(out, "{r},{c}")?;
        }
        Ok(())
    }
}

fn select_breakpoints(d: &DistanceMatrix, opts: &ProfileOptions) -> Vec<f64> {
    let mut values: Vec<f64> = d.distinct_values();
    if let Some(max_r) = opts.max_radius {
        values.retain(|&v| v <= max_r);
    }
    if let Some(k) = opts.max_breakpoints {
        let k = k.max(1);
        if values.len() > k {
            let m = values.len();
            values = (0..k)
                .map(|i| values[i * (m - 1) / (k - 1).max(1)])
                .collect();
            values.dedup();
        }
    }
    let mut radii = Vec::with_capacity(values.len() + 1);
    radii.push(0.0);
    radii.extend(values);
    radii
}

pub fn cover_profile(g: &WeightedGraph, method: ProfileMethod) -> Result<CoverProfile> {
    cover_profile_from_distances(&all_pairs_distances(g), method, &ProfileOptions::default())
}

/// Covering numbers at `0` and at every (selected) pairwise distance.
pub fn cover_profile_from_distances(
    d: &DistanceMatrix,
    method: ProfileMethod,
    opts: &ProfileOptions,
) -> Result<CoverProfile> {
    let limit = opts.exact_limit.unwrap_or(EXACT_COVER_LIMIT);
    if method == ProfileMethod::Exact {
        exact_cover_checked(d.n(), limit)?;
    }
    let radii = select_breakpoints(d, opts);
    let raw_counts = radii
        .iter()
        .map(|&r| {
            Ok(match method {
                ProfileMethod::Exact => exact_cover(d, r, limit)?.size,
                ProfileMethod::Greedy => greedy_cover(d, r)?.size,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counts = raw_counts.clone();
    for i in 1..counts.len() {
        counts[i] = counts[i].min(counts[i - 1]);
    }
    Ok(CoverProfile {
        method,
        radii,
        raw_counts,
        counts,
    })
}

/// Inequality `N(r) <= 1 + L/r` at one radius.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusCheck {
    pub radius: f64,
    /// `1 + L/r`.
    pub bound: f64,
    pub exact_size: Option<usize>,
    pub walk_cover_size: usize,
    pub walk_cover_valid: bool,
    pub pass: bool,
}

/// Count of balls `B(v, r)` holding more than one vertex whose departing
/// walk step exceeds `2r`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BallStepCheck {
    pub balls_checked: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Proposition1Report {
    pub n: usize,
    pub start: usize,
    pub total_length: f64,
    pub diameter: f64,
    pub radii: Vec<RadiusCheck>,
    pub profile_method: ProfileMethod,
    pub profile_points: usize,
    /// `2 * integral_0^{diam/2} N_hat(r) dr`.
    pub cover_integral: f64,
    pub ball_steps: BallStepCheck,
    pub pass_upper_cover_bound: bool,
    pub pass_length_bound: bool,
    pub pass_ball_steps: bool,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    /// Vertex limit for the exact covering number (default [`EXACT_COVER_LIMIT`]).
    pub exact_limit: Option<usize>,
    /// Cap on profile breakpoints for the greedy profile.
    pub max_breakpoints: Option<usize>,
}

/// Checks, for every centre and radius, that at most one vertex of the
/// ball departs with a step longer than `2r`.
pub fn check_ball_steps(d: &DistanceMatrix, walk: &WalkResult, radii: &[f64]) -> BallStepCheck {
    let departure = walk.departure_distances();
    let mut out = BallStepCheck::default();
    for &r in radii {
        for c in 0..d.n() {
            let long = d
                .row(c)
                .iter()
                .zip(&departure)
                .filter(|&(&dist, &step)| dist <= r && step > 2.0 * r)
                .count();
            out.balls_checked += 1;
            if long > 1 {
                out.violations += 1;
            }
        }
    }
    out
}

pub fn verify_proposition1(
    g: &WeightedGraph,
    start: usize,
    radii: &[f64],
) -> Result<Proposition1Report> {
    verify_proposition1_with(g, start, radii, &VerifyOptions::default())
}

/// Runs the walk from `start` and checks both cover inequalities. The exact
/// covering number is used when `n` is within the exact limit, otherwise the
/// greedy profile (an upper bound on `N(r)`) stands in for inequality (ii).
pub fn verify_proposition1_with(
    g: &WeightedGraph,
    start: usize,
    radii: &[f64],
    opts: &VerifyOptions,
) -> Result<Proposition1Report> {
    for &r in radii {
        if r <= 0.0 || !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "radii must be positive and finite, got {r}"
            )));
        }
    }
    let walk = nuv_walk(g, start)?;
    let d = all_pairs_distances(g);
    verify_with_walk(&d, &walk, radii, opts)
}

/// As [`verify_proposition1_with`], for a walk and distance matrix already at hand.
pub fn verify_with_walk(
    d: &DistanceMatrix,
    walk: &WalkResult,
    radii: &[f64],
    opts: &VerifyOptions,
) -> Result<Proposition1Report> {
    let n = d.n();
    let limit = opts.exact_limit.unwrap_or(EXACT_COVER_LIMIT);
    let exact = n <= limit && n <= 64;
    let total = walk.total_length;
    let diameter = d.max();

    let mut checks = Vec::with_capacity(radii.len());
    for &r in radii {
        let bound = 1.0 + total / r;
        let exact_size = if exact {
            Some(exact_cover(d, r, limit)?.size)
        } else {
            None
        };
        let wc = walk_cover_selection(walk, r)?;
        let walk_cover_valid = wc.covers(d);
        let pass = walk_cover_valid
            && wc.size as f64 <= bound
            && exact_size.is_none_or(|s| s as f64 <= bound);
        checks.push(RadiusCheck {
            radius: r,
            bound,
            exact_size,
            walk_cover_size: wc.size,
            walk_cover_valid,
            pass,
        });
    }

    let method = if exact {
        ProfileMethod::Exact
    } else {
        ProfileMethod::Greedy
    };
    let profile = cover_profile_from_distances(
        d,
        method,
        &ProfileOptions {
            max_radius: Some(diameter / 2.0),
            max_breakpoints: if exact { None } else { opts.max_breakpoints },
            exact_limit: Some(limit),
        },
    )?;
    let cover_integral = 2.0 * profile.integral(diameter / 2.0);
    let ball_steps = check_ball_steps(d, walk, radii);

    let pass_upper_cover_bound = checks.iter().all(|c| c.pass);
    let pass_length_bound = total <= cover_integral;
    let pass_ball_steps = ball_steps.violations == 0;
    Ok(Proposition1Report {
        n,
        start: walk.start,
        total_length: total,
        diameter,
        radii: checks,
        profile_method: method,
        profile_points: profile.radii.len(),
        cover_integral,
        ball_steps,
        pass_upper_cover_bound,
        pass_length_bound,
        pass_ball_steps,
        pass: pass_upper_cover_bound && pass_length_bound && pass_ball_steps,
    })
}

/// Up to `k` radii spread over the distinct pairwise distances.
pub fn default_radii(d: &DistanceMatrix, k: usize) -> Vec<f64> {
    let values = d.distinct_values();
    if values.len() <= k {
        return values;
    }
    let m = values.len();
    let mut out: Vec<f64> = (0..k)
        .map(|i| values[i * (m - 1) / (k - 1).max(1)])
        .collect();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_path(n: usize) -> WeightedGraph {
        WeightedGraph::from_edges(n, (1..n).map(|i| (i - 1, i, 1.0))).unwrap()
    }

    #[test]
    fn exact_cover_on_path() {
        let g = unit_path(5);
        let c = exact_cover_number(&g, 1.0).unwrap();
        assert_eq!(c.size, 2);
        // {0, 3} and {1, 3} are both minimum; the first in lexicographic order wins
        assert_eq!(c.centers, vec![0, 3]);
        assert_eq!(exact_cover_number(&g, 4.0).unwrap().size, 1);
        assert_eq!(exact_cover_number(&g, 0.0).unwrap().size, 5);
    }

    #[test]
    fn exact_cover_refuses_large_graphs() {
        let g = unit_path(EXACT_COVER_LIMIT + 1);
        assert!(matches!(
            exact_cover_number(&g, 1.0),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn greedy_cover_on_path() {
        let g = unit_path(5);
        let c = greedy_cover_number(&g, 1.0).unwrap();
        assert!(c.size <= 3 && c.size >= 2);
        assert!(c.covers(&all_pairs_distances(&g)));
        assert_eq!(greedy_cover_number(&g, 10.0).unwrap().size, 1);
    }

    #[test]
    fn profile_of_single_edge() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 7.5)]).unwrap();
        let p = cover_profile(&g, ProfileMethod::Exact).unwrap();
        assert_eq!(p.radii, vec![0.0, 7.5]);
        assert_eq!(p.counts, vec![2, 1]);
        assert_eq!(p.value_at(7.4), 2);
        assert_eq!(p.value_at(7.5), 1);
        assert_eq!(p.value_at(100.0), 1);
    }

    #[test]
    fn profile_of_short_path() {
        let p = cover_profile(&unit_path(3), ProfileMethod::Exact).unwrap();
        assert_eq!(p.value_at(0.0), 3);
        assert_eq!(p.value_at(1.0), 1);
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "r,N_hat\n0,3\n1,1\n2,1\n");
    }

    #[test]
    fn step_integral_on_path() {
        // N = 4 on [0, 1), N = 2 on [1, 1.5): 2 * (4 + 1) = 10
        let p = cover_profile(&unit_path(4), ProfileMethod::Exact).unwrap();
        assert_eq!(p.integral(1.5), 5.0);
        let rep = verify_proposition1(&unit_path(4), 0, &[0.5, 1.0, 1.5, 3.0, 10.0]).unwrap();
        assert_eq!(rep.total_length, 3.0);
        assert_eq!(rep.diameter, 3.0);
        assert_eq!(rep.cover_integral, 10.0);
        assert!(rep.pass, "{rep:?}");
        let last = rep.radii.last().unwrap();
        assert_eq!(last.walk_cover_size, 1);
    }

    #[test]
    fn envelope_is_running_minimum() {
        let p = CoverProfile {
            method: ProfileMethod::Greedy,
            radii: vec![0.0, 1.0, 2.0],
            raw_counts: vec![5, 3, 4],
            counts: vec![5, 3, 3],
        };
        assert_eq!(p.integral(10.0), 5.0 + 3.0 + 3.0 * 8.0);
    }

    #[test]
    fn radii_are_validated() {
        assert!(verify_proposition1(&unit_path(3), 0, &[0.0]).is_err());
        assert!(verify_proposition1(&unit_path(3), 0, &[-1.0]).is_err());
    }

    #[test]
    fn fitted_exponent_of_inverse_square() {
        let radii: Vec<f64> = (1..20).map(|i| i as f64).collect();
        let counts: Vec<usize> = radii.iter().map(|r| (1e6 / (r * r)) as usize).collect();
        let p = CoverProfile {
            method: ProfileMethod::Greedy,
            radii,
            raw_counts: counts.clone(),
            counts,
        };
        let a = p.fitted_exponent(0.5, 30.0).unwrap();
        assert!((a - 2.0).abs() < 0.01, "{a}");
    }
}
