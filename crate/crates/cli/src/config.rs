//! Run configuration: built-in defaults, then the TOML file, then flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use hodgelab_core::geometry::DEFAULT_SIGNATURE_TOL;

/// Known tolerance names and their defaults.
pub const TOLERANCES: &[(&str, f64)] = &[
    ("signature.degeneracy", DEFAULT_SIGNATURE_TOL),
    ("signature.sigma", 1e-12),
    ("signature.commutation", 1e-10),
    ("heat.route", 1e-8),
    ("heat.stable", 1e-10),
    ("heat.kernel", 1e-10),
    ("bergman.quadrature", 1e-7),
    ("bergman.route", 1e-6),
    ("bergman.fit", 1e-4),
    ("bergman.decay", 1e-6),
    ("bergman.projector", 1e-8),
];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub out: PathBuf,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub tolerances: BTreeMap<String, f64>,
    pub signature: SignatureConfig,
    pub heat: HeatConfig,
    pub bergman: BergmanConfig,
    pub flag: FlagConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            out: PathBuf::from("reports"),
            seed: 0,
            jobs: None,
            tolerances: TOLERANCES.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            signature: SignatureConfig::default(),
            heat: HeatConfig::default(),
            bergman: BergmanConfig::default(),
            flag: FlagConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SignatureConfig {
    /// JSON weight-function file; when absent `φ = Σ μ_j |z_j|²`.
    pub phi: Option<PathBuf>,
    pub mu: Vec<f64>,
    /// `[re, im]` per coordinate; the origin when empty.
    pub point: Vec<[f64; 2]>,
    /// Random points for the `Σ` and commutation checks.
    pub samples: usize,
}

impl Default for SignatureConfig {
    fn default() -> Self {
        Self {
            phi: None,
            mu: vec![0.5, -0.5],
            point: Vec::new(),
            samples: 20,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeatConfig {
    pub mu: Vec<f64>,
    pub t_max: f64,
    /// Number of grid points in `(0, t_max]`.
    pub samples: usize,
    pub step: f64,
    pub halve_step: bool,
    /// Half-width of the grid for the kernel-phase checks.
    pub grid_radius: f64,
}

impl Default for HeatConfig {
    fn default() -> Self {
        Self {
            mu: vec![1.0],
            t_max: 6.0,
            samples: 24,
            step: hodgelab_core::heat::DEFAULT_STEP,
            halve_step: false,
            grid_radius: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BergmanConfig {
    /// `fock`, `fock_mixed` or `p1_oK`.
    pub model: String,
    pub lambda: Vec<f64>,
    /// Form degree for `fock_mixed`.
    pub q: usize,
    pub k: Vec<u32>,
    /// Sample points `[re, im]`, repeated in every coordinate.
    pub points: Vec<[f64; 2]>,
    /// Offset of the second point in the off-diagonal sweep.
    pub offset: [f64; 2],
    pub projector_level: u32,
    /// Truncation degree of the Fock space in the projector checks.
    pub projector_degree: usize,
    pub max_level: u32,
}

impl Default for BergmanConfig {
    fn default() -> Self {
        Self {
            model: "fock".into(),
            lambda: vec![0.5],
            q: 0,
            k: vec![1, 2, 3, 4, 6, 8],
            points: vec![[0.0, 0.0], [0.3, 0.1]],
            offset: [0.25, 0.0],
            projector_level: 0,
            projector_degree: 12,
            max_level: 4,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlagConfig {
    pub root_system: String,
    /// Fundamental-weight coordinates.
    pub weight: Vec<i64>,
    pub k: Vec<i64>,
    /// Random root lists for the Todd identity.
    pub todd_samples: usize,
    pub todd_trunc: u32,
}

impl Default for FlagConfig {
    fn default() -> Self {
        Self {
            root_system: "A2".into(),
            weight: vec![2, -5],
            k: (1..=10).collect(),
            todd_samples: 50,
            todd_trunc: 8,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut cfg: RunConfig = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        // file tolerances extend the defaults
        let mut tol: BTreeMap<String, f64> = TOLERANCES.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        tol.append(&mut cfg.tolerances);
        cfg.tolerances = tol;
        Ok(cfg)
    }

    pub fn set_tolerance(&mut self, spec: &str) -> Result<(), String> {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| format!("tolerance '{spec}' is not NAME=VALUE"))?;
        let value: f64 = value.parse().map_err(|_| format!("tolerance '{spec}' has a non-numeric value"))?;
        self.tolerances.insert(name.to_string(), value);
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in &self.tolerances {
            if !TOLERANCES.iter().any(|(k, _)| k == name) {
                return Err(format!("unknown tolerance '{name}'"));
            }
            if !(*v > 0.0) || !v.is_finite() {
                return Err(format!("tolerance {name} must be positive, got {v}"));
            }
        }
        if self.bergman.k.is_empty() || self.flag.k.is_empty() {
            return Err("k range must be non-empty".into());
        }
        if self.heat.samples == 0 || !(self.heat.t_max > 0.0) {
            return Err("heat t-grid is empty: need samples ≥ 1 and t_max > 0".into());
        }
        if !(self.heat.step > 0.0) {
            return Err("heat step must be positive".into());
        }
        Ok(())
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }
}
