//! Experiment configuration and its flat `key = value` file format.
//!
//! ```text
//! # square model, Table-style run
//! model = square
//! n = 100
//! seed = 2024
//! replicates = 200
//! starts = 1
//! statistics = length, normalized_length, sd
//! out_dir = runs/square100
//! ```
//!
//! Keys: `model` (square | grid | mean_field | linear), `n` (vertex count;
//! not for grid), `m` (grid side; grid only), `seed` (required),
//! `replicates`, `starts`, `statistics` (comma separated), `out_dir`,
//! `scaling` (unit | nearest_neighbor; square only) and `lengths`
//! (exponential | uniform; grid only). Blank lines and `#` comments are
//! ignored; unknown or repeated keys are errors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{EdgeLaw, InstanceSpec, Model, Scaling};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Length,
    NormalizedLength,
    Sd,
    VarianceDecomposition,
    StartRatio,
    Diameter,
    Mst,
    Tsp,
    CoverProfile,
}

impl Statistic {
    pub const ALL: [Statistic; 9] = [
        Statistic::Length,
        Statistic::NormalizedLength,
        Statistic::Sd,
        Statistic::VarianceDecomposition,
        Statistic::StartRatio,
        Statistic::Diameter,
        Statistic::Mst,
        Statistic::Tsp,
        Statistic::CoverProfile,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Length => "length",
            Statistic::NormalizedLength => "normalized_length",
            Statistic::Sd => "sd",
            Statistic::VarianceDecomposition => "variance_decomposition",
            Statistic::StartRatio => "start_ratio",
            Statistic::Diameter => "diameter",
            Statistic::Mst => "mst",
            Statistic::Tsp => "tsp",
            Statistic::CoverProfile => "cover_profile",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown statistic '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    /// Model and size; `instance.seed` is the base seed of the run.
    pub instance: InstanceSpec,
    pub replicates: usize,
    pub starts_per_graph: usize,
    pub statistics: Vec<Statistic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

/// Replicate count used when the config does not set one: 200 for small
/// square instances, 100 up to 400 vertices, 50 beyond.
pub fn default_replicates(spec: &InstanceSpec) -> usize {
    let n = spec.vertex_count();
    match spec.model {
        Model::Square if n <= 200 => 200,
        _ if n <= 400 => 100,
        _ => 50,
    }
}

impl ExperimentConfig {
    pub fn new(instance: InstanceSpec) -> Self {
        ExperimentConfig {
            replicates: default_replicates(&instance),
            instance,
            starts_per_graph: 1,
            statistics: vec![
                Statistic::Length,
                Statistic::NormalizedLength,
                Statistic::Sd,
            ],
            out_dir: None,
        }
    }

    pub fn with_replicates(mut self, r: usize) -> Self {
        self.replicates = r;
        self
    }

    pub fn with_starts(mut self, k: usize) -> Self {
        self.starts_per_graph = k;
        self
    }

    pub fn with_statistics(mut self, stats: &[Statistic]) -> Self {
        self.statistics = stats.to_vec();
        self
    }

    pub fn wants(&self, s: Statistic) -> bool {
        self.statistics.contains(&s)
    }

    /// Structural checks; per-statistic size limits are reported by the run.
    pub fn validate(&self) -> Result<()> {
        self.instance.validate()?;
        if self.replicates == 0 {
            return Err(Error::InvalidParameter(
                "replicates must be at least 1".into(),
            ));
        }
        if self.starts_per_graph == 0 {
            return Err(Error::InvalidParameter("starts must be at least 1".into()));
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: ExperimentConfig = text.parse()?;
        if let Some(dir) = cfg.out_dir.as_mut() {
            if dir.is_relative() {
                if let Some(parent) = path.parent() {
                    *dir = parent.join(&*dir);
                }
            }
        }
        Ok(cfg)
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| Error::Parse {
        line,
        message: format!("invalid value '{value}' for '{key}': {e}"),
    })
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut kv: BTreeMap<String, (String, usize)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: format!("expected 'key = value', got '{line}'"),
                })?;
            let key = key.trim().to_string();
            const KEYS: [&str; 10] = [
                "model",
                "n",
                "m",
                "seed",
                "replicates",
                "starts",
                "statistics",
                "out_dir",
                "scaling",
                "lengths",
            ];
            if !KEYS.contains(&key.as_str()) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown key '{key}'"),
                });
            }
            if kv
                .insert(key.clone(), (value.trim().to_string(), line_no))
                .is_some()
            {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("key '{key}' given twice"),
                });
            }
        }
        let get = |k: &str| kv.get(k).map(|(v, l)| (v.as_str(), *l));
        let missing = |k: &str| Error::Parse {
            line: 0,
            message: format!("missing required key '{k}'"),
        };

        let (model_s, line) = get("model").ok_or_else(|| missing("model"))?;
        let model: Model = parse_value("model", model_s, line)?;
        let (seed_s, line) = get("seed").ok_or_else(|| missing("seed"))?;
        let seed: u64 = parse_value("seed", seed_s, line)?;
        let size = match model {
            Model::Grid => {
                if let Some((_, line)) = get("n") {
                    return Err(Error::Parse {
                        line,
                        message: "grid model is sized by 'm', not 'n'".into(),
                    });
                }
                let (v, line) = get("m").ok_or_else(|| missing("m"))?;
                parse_value::<usize>("m", v, line)?
            }
            _ => {
                if let Some((_, line)) = get("m") {
                    return Err(Error::Parse {
                        line,
                        message: format!("'m' applies to the grid model only, not {model}"),
                    });
                }
                let (v, line) = get("n").ok_or_else(|| missing("n"))?;
                parse_value::<usize>("n", v, line)?
            }
        };
        let mut instance = InstanceSpec::new(model, size, seed);
        if let Some((v, line)) = get("scaling") {
            instance.scaling = parse_value::<Scaling>("scaling", v, line)?;
        }
        if let Some((v, line)) = get("lengths") {
            instance.edge_law = parse_value::<EdgeLaw>("lengths", v, line)?;
        }

        let mut cfg = ExperimentConfig::new(instance);
        if let Some((v, line)) = get("replicates") {
            cfg.replicates = parse_value("replicates", v, line)?;
        }
        if let Some((v, line)) = get("starts") {
            cfg.starts_per_graph = parse_value("starts", v, line)?;
        }
        if let Some((v, line)) = get("statistics") {
            let mut stats = Vec::new();
            for name in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let s: Statistic = parse_value("statistics", name, line)?;
                if !stats.contains(&s) {
                    stats.push(s);
                }
            }
            cfg.statistics = stats;
        }
        if let Some((v, _)) = get("out_dir") {
            cfg.out_dir = Some(PathBuf::from(v));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
