//! Declarative experiment description: a TOML file with a topology block,
//! an optional packet block, an observable block and an output block.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::runner::RunError;

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub topology: Topology,
    #[serde(default)]
    pub packet: Option<Packet>,
    pub observable: Observable,
    #[serde(default)]
    pub output: Option<Output>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Topology {
    Star {
        m: usize,
        #[serde(rename = "M")]
        input_len: usize,
        #[serde(rename = "N")]
        arm_len: usize,
        #[serde(rename = "J")]
        coupling: f64,
        #[serde(rename = "J_n")]
        node_coupling: f64,
    },
    Ybeam {
        #[serde(rename = "M")]
        input_len: usize,
        #[serde(rename = "N_B")]
        len_b: usize,
        #[serde(rename = "N_C")]
        len_c: usize,
        #[serde(rename = "J_A")]
        j_a: f64,
        #[serde(rename = "J_B")]
        j_b: f64,
        #[serde(rename = "J_C")]
        j_c: f64,
        /// Omitted when a sweep supplies the node couplings per grid point.
        #[serde(rename = "J_nB", default)]
        j_nb: Option<f64>,
        #[serde(rename = "J_nC", default)]
        j_nc: Option<f64>,
    },
    Interferometer {
        #[serde(rename = "N_A")]
        len_a: usize,
        #[serde(rename = "N_B")]
        len_b: usize,
        /// Path difference; the interference sweep overrides it per point.
        #[serde(default)]
        delta: i64,
        #[serde(rename = "N_D")]
        len_d: usize,
        #[serde(rename = "J")]
        coupling: f64,
        #[serde(rename = "J_node")]
        node_coupling: f64,
    },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Packet {
    pub leg: String,
    pub n0: f64,
    pub alpha: f64,
    /// Defaults to pi/2, the dispersionless carrier.
    #[serde(default)]
    pub momentum: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Observable {
    #[serde(rename = "reflection")]
    Reflection {
        j_nb: RangeSpec,
        j_nc: RangeSpec,
        #[serde(default)]
        t0: Option<f64>,
    },
    #[serde(rename = "concurrence")]
    Concurrence {
        j_nb: RangeSpec,
        j_nc: RangeSpec,
        #[serde(default)]
        time_points: Option<usize>,
    },
    #[serde(rename = "interference")]
    Interference {
        delta: DeltaRange,
        /// Probe site as a 1-based depth into leg D.
        r0: usize,
        #[serde(default)]
        t0: Option<f64>,
    },
    #[serde(rename = "transform-check")]
    TransformCheck,
    #[serde(rename = "evolve")]
    Evolve { times: TimeGrid },
}

impl Observable {
    pub fn kind(&self) -> &'static str {
        match self {
            Observable::Reflection { .. } => "reflection",
            Observable::Concurrence { .. } => "concurrence",
            Observable::Interference { .. } => "interference",
            Observable::TransformCheck => "transform-check",
            Observable::Evolve { .. } => "evolve",
        }
    }
}

/// Inclusive arithmetic grid `min, min + step, ..` up to `max`.
#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl RangeSpec {
    pub fn values(&self, key: &str) -> Result<Vec<f64>, RunError> {
        if !(self.step > 0.0) {
            return Err(RunError::Config(format!("{key}.step must be > 0, got {}", self.step)));
        }
        if self.max < self.min {
            return Err(RunError::Config(format!("{key}: max {} below min {}", self.max, self.min)));
        }
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| self.min + self.step * i as f64).collect())
    }
}

/// Inclusive integer range with unit step.
#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaRange {
    pub min: i64,
    pub max: i64,
}

impl DeltaRange {
    pub fn values(&self, key: &str) -> Result<Vec<i64>, RunError> {
        if self.max < self.min {
            return Err(RunError::Config(format!("{key}: max {} below min {}", self.max, self.min)));
        }
        Ok((self.min..=self.max).collect())
    }
}

/// Uniform time grid: `samples` instants from 0 to `max` inclusive.
#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub max: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub fn load(path: &Path) -> Result<ExperimentConfig, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Io(format!("reading config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))
}
