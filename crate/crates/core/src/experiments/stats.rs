use serde::Serialize;

use crate::error::{Error, Result};

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance with the `n - 1` divisor; zero for fewer than two values.
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

pub fn sample_sd(xs: &[f64]) -> f64 {
    sample_variance(xs).sqrt()
}

/// Mean, standard deviation and standard error of the mean.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    pub sd: f64,
    pub standard_error: f64,
}

impl Moments {
    pub fn of(xs: &[f64]) -> Self {
        let sd = sample_sd(xs);
        Moments {
            count: xs.len(),
            mean: mean(xs),
            sd,
            standard_error: sd / (xs.len() as f64).sqrt(),
        }
    }
}

/// Sums of squares of the one-way layout; `total == between + within`
/// up to rounding.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumsOfSquares {
    pub between: f64,
    pub within: f64,
    pub total: f64,
}

/// Split of the variance of walk lengths into a between-graph part
/// (`var E(L | G)`) and a within-graph part (`E var(L | G)`, the
/// variability due to the start).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VarianceDecomposition {
    pub graphs: usize,
    pub starts_per_graph: usize,
    pub between: f64,
    pub within: f64,
    /// `between / within`; infinite when `within == 0`.
    pub ratio: f64,
    /// The raw between-graph estimate was negative and has been set to zero.
    pub floored: bool,
    pub sums_of_squares: SumsOfSquares,
}

/// Nested-design estimators over `groups[g][k]` = length of walk `k` on
/// graph `g`: `within` is the mean per-graph sample variance and `between`
/// is the sample variance of per-graph means minus `within / K`, floored
/// at zero.
pub fn variance_decomposition(groups: &[Vec<f64>]) -> Result<VarianceDecomposition> {
    let r = groups.len();
    let k = groups.first().map_or(0, Vec::len);
    if r < 2 || k < 2 {
        return Err(Error::InsufficientReplication(format!(
            "variance decomposition needs at least 2 graphs and 2 starts per graph, got {r} x {k}"
        )));
    }
    if groups.iter().any(|g| g.len() != k) {
        return Err(Error::InvalidParameter(
            "variance decomposition needs the same number of starts on every graph".into(),
        ));
    }
    let means: Vec<f64> = groups.iter().map(|g| mean(g)).collect();
    let within = groups.iter().map(|g| sample_variance(g)).sum::<f64>() / r as f64;
    let raw_between = sample_variance(&means) - within / k as f64;
    let floored = raw_between < 0.0;
    let between = raw_between.max(0.0);

    let all: Vec<f64> = groups.iter().flatten().copied().collect();
    let grand = mean(&all);
    let ss_between = k as f64 * means.iter().map(|m| (m - grand).powi(2)).sum::<f64>();
    let ss_within: f64 = groups
        .iter()
        .zip(&means)
        .map(|(g, m)| g.iter().map(|x| (x - m).powi(2)).sum::<f64>())
        .sum();
    let ss_total: f64 = all.iter().map(|x| (x - grand).powi(2)).sum();

    Ok(VarianceDecomposition {
        graphs: r,
        starts_per_graph: k,
        between,
        within,
        ratio: if within > 0.0 {
            between / within
        } else {
            f64::INFINITY
        },
        floored,
        sums_of_squares: SumsOfSquares {
            between: ss_between,
            within: ss_within,
            total: ss_total,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments() {
        let m = Moments::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, 2.5);
        assert!((m.sd - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(sample_variance(&[3.0]), 0.0);
    }

    #[test]
    fn decomposition_by_hand() {
        // graph means 2 and 6, per-graph variances 1 and 1
        let groups = vec![vec![1.0, 2.0, 3.0], vec![5.0, 6.0, 7.0]];
        let v = variance_decomposition(&groups).unwrap();
        assert_eq!(v.within, 1.0);
        // var of means = 8, minus within / 3
        assert!((v.between - (8.0 - 1.0 / 3.0)).abs() < 1e-12);
        let ss = &v.sums_of_squares;
        assert_eq!(ss.between, 24.0);
        assert_eq!(ss.within, 4.0);
        assert_eq!(ss.total, 28.0);
    }

    #[test]
    fn identical_starts_have_no_within_variance() {
        let v = variance_decomposition(&[vec![3.0, 3.0], vec![4.0, 4.0]]).unwrap();
        assert_eq!(v.within, 0.0);
        assert!(v.ratio.is_infinite());
    }

    #[test]
    fn negative_between_is_floored() {
        let v = variance_decomposition(&[vec![0.0, 10.0], vec![10.0, 0.0]]).unwrap();
        assert!(v.floored);
        assert_eq!(v.between, 0.0);
    }

    #[test]
    fn replication_requirements() {
        assert!(variance_decomposition(&[vec![1.0, 2.0]]).is_err());
        assert!(variance_decomposition(&[vec![1.0], vec![2.0]]).is_err());
        assert!(variance_decomposition(&[vec![1.0, 2.0], vec![2.0]]).is_err());
    }
}
