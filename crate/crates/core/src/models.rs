//! Random instance generators and the deterministic linear graph.
//!
//! Draw order is fixed: square-model points are drawn in index order (`x`
//! then `y`), and grid and mean-field edge lengths are drawn for pairs
//! `u < v` in lexicographic order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Complete Euclidean graph on uniform points in the unit square.
    Square,
    /// `m x m` lattice with i.i.d. edge lengths.
    Grid,
    /// Complete graph with i.i.d. Exponential(mean n) lengths.
    MeanField,
    /// Path graph with slowly decreasing lengths `1 - i/n^2`.
    Linear,
}

/// Length scale for the square model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    /// Points in the unit square (walk length `L*`).
    #[default]
    Unit,
    /// Square of area `n`, so nearest-neighbour distances are order one
    /// and `L = n^{1/2} L*`.
    NearestNeighbor,
}

/// Edge-length law for the grid model; both have mean-one scale.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeLaw {
    #[default]
    Exponential,
    /// Uniform on `(0, 1)`.
    Uniform,
}

macro_rules! string_enum {
    ($ty:ty { $($name:literal => $variant:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($variant),)+
                    other => Err(Error::InvalidParameter(format!(
                        concat!("unknown ", stringify!($ty), " '{}' (expected one of: ", $($name, " "),+, ")"),
                        other
                    ))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let name = match self {
                    $(v if *v == $variant => $name,)+
                    _ => unreachable!(),
                };
                f.write_str(name)
            }
        }
    };
}

string_enum!(Model {
    "square" => Model::Square,
    "grid" => Model::Grid,
    "mean_field" => Model::MeanField,
    "linear" => Model::Linear,
});

string_enum!(Scaling {
    "unit" => Scaling::Unit,
    "nearest_neighbor" => Scaling::NearestNeighbor,
});

string_enum!(EdgeLaw {
    "exponential" => EdgeLaw::Exponential,
    "uniform" => EdgeLaw::Uniform,
});

/// Everything needed to regenerate one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub model: Model,
    /// `n` for square, mean-field and linear; side `m` for grid.
    pub size: usize,
    pub seed: u64,
    #[serde(default)]
    pub scaling: Scaling,
    #[serde(default)]
    pub edge_law: EdgeLaw,
}

/// A complete Euclidean graph together with its points.
#[derive(Clone, Debug)]
pub struct GeometricInstance {
    pub points: Vec<[f64; 2]>,
    pub graph: WeightedGraph,
}

/// A generated instance; `points` is present for geometric models only.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: WeightedGraph,
    pub points: Option<Vec<[f64; 2]>>,
}

impl InstanceSpec {
    pub fn new(model: Model, size: usize, seed: u64) -> Self {
        InstanceSpec {
            model,
            size,
            seed,
            scaling: Scaling::Unit,
            edge_law: EdgeLaw::Exponential,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.size < 2 {
            return Err(Error::InvalidParameter(format!(
                "{} model needs size >= 2, got {}",
                self.model, self.size
            )));
        }
        if self.scaling != Scaling::Unit && self.model != Model::Square {
            return Err(Error::InvalidParameter(format!(
                "scaling applies to the square model only, not {}",
                self.model
            )));
        }
        Ok(())
    }

    /// Number of vertices of the generated graph.
    pub fn vertex_count(&self) -> usize {
        match self.model {
            Model::Grid => self.size * self.size,
            _ => self.size,
        }
    }

    /// Factor that turns a walk length into the normalised column of the
    /// simulation tables: `n^{-1/2}` for the unit square, `n^{-1}` otherwise.
    pub fn normalizer(&self) -> f64 {
        let n = self.vertex_count() as f64;
        match (self.model, self.scaling) {
            (Model::Square, Scaling::Unit) => n.sqrt().recip(),
            _ => n.recip(),
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        InstanceSpec {
            seed,
            ..self.clone()
        }
    }

    pub fn generate(&self) -> Result<Instance> {
        self.validate()?;
        Ok(match self.model {
            Model::Square => {
                let g = gen_square(self.size, self.seed, self.scaling)?;
                Instance {
                    graph: g.graph,
                    points: Some(g.points),
                }
            }
            Model::Grid => Instance {
                graph: gen_grid_with(self.size, self.seed, self.edge_law)?,
                points: None,
            },
            Model::MeanField => Instance {
                graph: gen_mean_field(self.size, self.seed)?,
                points: None,
            },
            Model::Linear => Instance {
                graph: gen_linear(self.size)?,
                points: None,
            },
        })
    }
}

fn require_size(what: &str, size: usize) -> Result<()> {
    if size < 2 {
        Err(Error::InvalidParameter(format!(
            "{what} needs size >= 2, got {size}"
        )))
    } else {
        Ok(())
    }
}

/// `n` i.i.d. uniform points and their complete Euclidean graph.
pub fn gen_square(n: usize, seed: u64, scaling: Scaling) -> Result<GeometricInstance> {
    require_size("square model", n)?;
    let mut r = rng::stream(seed);
    let side = match scaling {
        Scaling::Unit => 1.0,
        Scaling::NearestNeighbor => (n as f64).sqrt(),
    };
    let points: Vec<[f64; 2]> = (0..n)
        .map(|_| {
            let x = rng::uniform_open01(&mut r);
            let y = rng::uniform_open01(&mut r);
            [x * side, y * side]
        })
        .collect();
    let graph = WeightedGraph::euclidean(&points)?;
    Ok(GeometricInstance { points, graph })
}

/// `m x m` grid with i.i.d. Exponential(1) lengths. Vertex `(row, col)` has
/// index `row * m + col`.
pub fn gen_grid(m: usize, seed: u64) -> Result<WeightedGraph> {
    gen_grid_with(m, seed, EdgeLaw::Exponential)
}

pub fn gen_grid_with(m: usize, seed: u64, law: EdgeLaw) -> Result<WeightedGraph> {
    require_size("grid model", m)?;
    let mut r = rng::stream(seed);
    let mut edges = Vec::with_capacity(2 * m * (m - 1));
    for u in 0..m * m {
        let (row, col) = (u / m, u % m);
        if col + 1 < m {
            edges.push((u, u + 1));
        }
        if row + 1 < m {
            edges.push((u, u + m));
        }
    }
    let weighted: Vec<_> = edges
        .into_iter()
        .map(|(u, v)| {
            let l = match law {
                EdgeLaw::Exponential => rng::exponential(&mut r, 1.0),
                EdgeLaw::Uniform => rng::uniform_open01(&mut r),
            };
            (u, v, l)
        })
        .collect();
    WeightedGraph::from_edges(m * m, weighted)
}

/// Complete graph with i.i.d. Exponential(mean `n`) lengths.
pub fn gen_mean_field(n: usize, seed: u64) -> Result<WeightedGraph> {
    require_size("mean-field model", n)?;
    let mut r = rng::stream(seed);
    let mean = n as f64;
    WeightedGraph::complete_with(n, |_, _| rng::exponential(&mut r, mean))
}

/// Path `0 - 1 - ... - (n-1)` with `len(i-1, i) = 1 - i/n^2`.
pub fn gen_linear(n: usize) -> Result<WeightedGraph> {
    require_size("linear graph", n)?;
    let nn = (n * n) as f64;
    WeightedGraph::from_edges(n, (1..n).map(|i| (i - 1, i, 1.0 - i as f64 / nn)))
}
