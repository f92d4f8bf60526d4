//! Run configuration: one TOML document, overridden by command-line flags.

use std::path::{Path, PathBuf};

use fueterlab_core::contour::Resolution;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, CliResult};
use crate::fields::{FieldSpec, Q4};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    #[default]
    Kernel,
    Selfdual,
    Chern,
    Ord,
    Suite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Kernel => "kernel",
            Command::Selfdual => "selfdual",
            Command::Chern => "chern",
            Command::Ord => "ord",
            Command::Suite => "suite",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    #[default]
    Euclidean,
    Cylinder,
    Hopf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContourConfig {
    pub epsilon: f64,
    /// `(n_ψ, n_θ, n_φ)`.
    pub resolution: [usize; 3],
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig { epsilon: 1.0, resolution: [32, 32, 32] }
    }
}

impl ContourConfig {
    pub fn resolution(&self) -> Resolution {
        let [n_psi, n_theta, n_phi] = self.resolution;
        Resolution { n_psi, n_theta, n_phi }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Simpson nodes per axis (odd).
    pub nodes: usize,
    /// The box is `[-box_half, box_half]⁴`.
    pub box_half: f64,
    pub step: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { nodes: 25, box_half: 4.0, step: fueterlab_core::gauge::FIELD_STRENGTH_STEP }
    }
}

/// Points for `kernel`: an explicit list, or else a line scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub points: Vec<Q4>,
    pub from: Q4,
    pub to: Q4,
    pub samples: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { points: Vec::new(), from: [0.5, 0.0, 0.0, 0.0], to: [2.0, 0.0, 0.0, 0.0], samples: 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelfDualConfig {
    pub samples: usize,
    /// Sampling cube half-width.
    pub radius: f64,
    /// Samples closer than this to a singularity are redrawn.
    pub min_distance: f64,
    pub tolerance: f64,
}

impl Default for SelfDualConfig {
    fn default() -> Self {
        SelfDualConfig { samples: 50, radius: 2.0, min_distance: 0.1, tolerance: 1e-3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChernConfig {
    /// Also run the (slow) volume route.
    pub volume: bool,
    /// Contour radius around the poles for the collision check.
    pub epsilon: f64,
}

impl Default for ChernConfig {
    fn default() -> Self {
        ChernConfig { volume: true, epsilon: 0.1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrdConfig {
    pub geometry: Geometry,
    /// The map whose zero (or, on the Hopf manifold, value) is counted.
    pub map: FieldSpec,
    /// Known zero; when absent a local search starts at `start`.
    pub zero: Option<Q4>,
    pub start: Q4,
    /// Lattice rank for the cylinder geometry.
    pub p: usize,
    pub truncation_k: usize,
    /// Dilation factor for the Hopf geometry.
    pub m: f64,
}

impl Default for OrdConfig {
    fn default() -> Self {
        OrdConfig {
            geometry: Geometry::Euclidean,
            map: FieldSpec::Identity,
            zero: None,
            start: [0.3, 0.2, -0.1, 0.1],
            p: 1,
            truncation_k: 30,
            m: 2.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Suite criteria whose name contains this string.
    pub filter: Option<String>,
    /// Record wall time; off by default because it breaks byte-identical output.
    pub timings: bool,
    /// Cheaper suite parameters, used for the determinism probe.
    pub quick: bool,
    pub field: FieldSpec,
    pub contour: ContourConfig,
    pub grid: GridConfig,
    pub scan: ScanConfig,
    pub selfdual: SelfDualConfig,
    pub chern: ChernConfig,
    pub ord: OrdConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::Kernel,
            seed: 0,
            format: Format::Json,
            out: None,
            threads: None,
            filter: None,
            timings: false,
            quick: false,
            field: FieldSpec::default(),
            contour: ContourConfig::default(),
            grid: GridConfig::default(),
            scan: ScanConfig::default(),
            selfdual: SelfDualConfig::default(),
            chern: ChernConfig::default(),
            ord: OrdConfig::default(),
        }
    }
}

fn finite(name: &str, xs: &[f64]) -> CliResult<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(config_err(format!("{name} must be finite")))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| config_err(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Range checks on everything numeric.
    pub fn validate(&self) -> CliResult<()> {
        if !(self.contour.epsilon > 0.0) || !self.contour.epsilon.is_finite() {
            return Err(config_err(format!("epsilon = {} must be positive", self.contour.epsilon)));
        }
        if self.contour.resolution.iter().any(|&n| n < 4 || n > 4096) {
            return Err(config_err("resolution entries must lie in 4..=4096"));
        }
        if self.contour.resolution[0] % 2 != 0 {
            return Err(config_err("n_psi must be even"));
        }
        if self.grid.nodes < 3 || self.grid.nodes % 2 == 0 || self.grid.nodes > 257 {
            return Err(config_err(format!("grid nodes = {} must be odd and in 3..=257", self.grid.nodes)));
        }
        if !(self.grid.box_half > 0.0) || !(self.grid.step > 0.0) {
            return Err(config_err("box and step must be positive"));
        }
        finite("grid", &[self.grid.box_half, self.grid.step])?;
        if self.scan.points.is_empty() && self.scan.samples == 0 {
            return Err(config_err("scan needs points or samples ≥ 1"));
        }
        finite("scan", &[self.scan.from, self.scan.to].concat())?;
        for p in &self.scan.points {
            finite("scan point", p)?;
        }
        if self.selfdual.samples == 0 || !(self.selfdual.radius > 0.0) || !(self.selfdual.tolerance > 0.0) {
            return Err(config_err("selfdual samples, radius and tolerance must be positive"));
        }
        if !(self.chern.epsilon > 0.0) {
            return Err(config_err("chern epsilon must be positive"));
        }
        if !(1..=4).contains(&self.ord.p) {
            return Err(config_err(format!("lattice rank p = {} outside 1..=4", self.ord.p)));
        }
        finite("ord point", &self.ord.zero.unwrap_or(self.ord.start))?;
        if self.threads == Some(0) {
            return Err(config_err("threads must be at least 1"));
        }
        Ok(())
    }
}
