//! Nearest-unvisited-vertex walks on weighted graphs.
//!
//! The walk starts at a vertex and repeatedly travels a shortest route to
//! the closest vertex not yet visited. This crate provides the walk engine,
//! ball-cover bounds that sandwich its length, exact MST and TSP baselines,
//! generators for the square, grid and mean-field random graph models, and
//! a reproducible Monte-Carlo harness.
//!
//! ```
//! use nuv_core::{gen_linear, nuv_walk};
//!
//! let g = gen_linear(4).unwrap();
//! let w = nuv_walk(&g, 0).unwrap();
//! assert_eq!(w.order, vec![0, 1, 2, 3]);
//! ```

pub mod baselines;
pub mod cover;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod io;
pub mod models;
pub mod rng;
pub mod walk;

pub use baselines::{
    baselines, exact_tsp_walk, minimum_spanning_tree, mst_length, nuv_tsp_ratio, BaselineResult,
    TspResult, EXACT_TSP_LIMIT,
};
pub use cover::{
    check_ball_steps, cover_profile, cover_profile_from_distances, exact_cover, exact_cover_number,
    greedy_cover, greedy_cover_number, verify_proposition1, verify_proposition1_with, CoverMethod,
    CoverProfile, CoverResult, ProfileMethod, ProfileOptions, Proposition1Report, VerifyOptions,
    EXACT_COVER_LIMIT,
};
pub use error::{Error, Result};
pub use experiments::figures::{emit_figure_data, FigureKind, FigureRequest};
pub use experiments::{
    overlap_fraction, run_experiment, run_experiment_with_workers, start_sensitivity,
    variance_decomposition, ExperimentConfig, ExperimentSummary, StartSensitivity, Statistic,
    VarianceDecomposition,
};
pub use graph::{
    all_pairs_distances, diameter, nearest_unvisited, shortest_path, single_source_distances,
    DistanceMatrix, PathResult, WeightedGraph,
};
pub use models::{
    gen_grid, gen_linear, gen_mean_field, gen_square, EdgeLaw, GeometricInstance, Instance,
    InstanceSpec, Model, Scaling,
};
pub use walk::{
    nuv_walk, nuv_walk_with, step_histogram, walk_cover_selection, Histogram, WalkOptions,
    WalkResult,
};
