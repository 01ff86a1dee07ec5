//! JSON inputs: matrix files and experiment configurations.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::region::ObservationRegion;
use crate::error::{invalid, Result};
use crate::operators::{
    build_heat_generator, build_ou_generator_with, lyapunov_gramian, Basis, DiscreteGenerator,
    DriftSpec, HermiteBasis, SectorFitOptions, DEFAULT_MAX_BASIS,
};

/// `{"n": 2, "rows": [[-1, 2], [0, -1]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        Self {
            n: m.nrows(),
            rows: m.row_iter().map(|r| r.iter().copied().collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<DMatrix<f64>> {
        if self.rows.len() != self.n || self.rows.iter().any(|r| r.len() != self.n) {
            return Err(invalid(
                "rows",
                format!("expected {} rows of length {}", self.n, self.n),
            ));
        }
        Ok(DMatrix::from_fn(self.n, self.n, |i, j| self.rows[i][j]))
    }
}

pub fn read_matrix(path: &Path) -> Result<DMatrix<f64>> {
    let text = std::fs::read_to_string(path)?;
    let file: MatrixFile = serde_json::from_str(&text)?;
    file.to_matrix()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorConfig {
    /// Dirichlet Laplacian on `(0, length)`.
    Heat {
        modes: usize,
        #[serde(default = "default_length")]
        length: f64,
    },
    /// Ornstein–Uhlenbeck operator in `L²_μ`.
    Ou {
        drift: MatrixFile,
        #[serde(default)]
        diffusion: Option<MatrixFile>,
        order: usize,
        #[serde(default = "default_max_dim")]
        max_dim: usize,
    },
    /// Arbitrary matrix in a sine or Hermite basis; `K`, `κ` are fitted.
    Custom {
        matrix: MatrixFile,
        basis: BasisConfig,
        angle: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisConfig {
    Sine { length: f64 },
    Hermite { drift: MatrixFile, order: usize },
}

fn default_length() -> f64 {
    1.0
}

fn default_max_dim() -> usize {
    DEFAULT_MAX_BASIS
}

impl GeneratorConfig {
    pub fn build(&self) -> Result<DiscreteGenerator> {
        match self {
            GeneratorConfig::Heat { modes, length } => build_heat_generator(*modes, *length),
            GeneratorConfig::Ou {
                drift,
                diffusion,
                order,
                max_dim,
            } => {
                let spec = drift_spec(drift, diffusion.as_ref())?;
                build_ou_generator_with(&spec, *order, *max_dim, SectorFitOptions::default())
            }
            GeneratorConfig::Custom {
                matrix,
                basis,
                angle,
            } => {
                let m = matrix.to_matrix()?;
                let basis = match basis {
                    BasisConfig::Sine { length } => Basis::Sine {
                        length: *length,
                        modes: m.nrows(),
                    },
                    BasisConfig::Hermite { drift, order } => {
                        let spec = DriftSpec::new(drift.to_matrix()?)?;
                        let g = lyapunov_gramian(&spec)?;
                        Basis::Hermite(HermiteBasis::new(&g.q_inf, *order, DEFAULT_MAX_BASIS)?)
                    }
                };
                DiscreteGenerator::fitted(m, basis, *angle, SectorFitOptions::default())
            }
        }
    }
}

pub fn drift_spec(drift: &MatrixFile, diffusion: Option<&MatrixFile>) -> Result<DriftSpec> {
    let b = drift.to_matrix()?;
    match diffusion {
        Some(q) => DriftSpec::with_diffusion(b, q.to_matrix()?),
        None => DriftSpec::new(b),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryConfig {
    pub theta: f64,
    /// Defaults to the generator's angle.
    #[serde(default)]
    pub psi: Option<f64>,
}

/// The part of the stability constants a user chooses; the rest is measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityConfig {
    pub eps: f64,
    pub p: f64,
    pub s: f64,
    #[serde(rename = "M")]
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub count: usize,
    pub seed: u64,
    /// Scale factors applied to the whole ensemble in stability mode.
    #[serde(default = "default_amplitudes")]
    pub amplitudes: Vec<f64>,
}

fn default_amplitudes() -> Vec<f64> {
    vec![1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGridConfig {
    /// Trapezoid nodes for the observation integral.
    #[serde(default = "default_n_times")]
    pub n_times: usize,
    /// Evaluation times `jθ/n_eval`, `j = 1..=n_eval`, in log-convexity mode.
    #[serde(default = "default_n_eval")]
    pub n_eval: usize,
    /// Gauss–Hermite nodes per dimension for observation integrals.
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}

fn default_n_times() -> usize {
    64
}

fn default_n_eval() -> usize {
    50
}

fn default_resolution() -> usize {
    40
}

impl Default for TimeGridConfig {
    fn default() -> Self {
        Self {
            n_times: default_n_times(),
            n_eval: default_n_eval(),
            resolution: default_resolution(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub generator: GeneratorConfig,
    #[serde(default = "ObservationRegion::full")]
    pub region: ObservationRegion,
    pub geometry: GeometryConfig,
    pub stability_params: StabilityConfig,
    pub ensemble: EnsembleConfig,
    #[serde(default)]
    pub time_grid: TimeGridConfig,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.region.validate()?;
        if cfg.ensemble.count == 0 {
            return Err(invalid("ensemble.count", "need at least one sample"));
        }
        if cfg.ensemble.amplitudes.iter().any(|a| !(*a > 0.0)) {
            return Err(invalid(
                "ensemble.amplitudes",
                "amplitudes must be positive",
            ));
        }
        Ok(cfg)
    }

    /// SHA-256 of the canonical (key-sorted, compact) JSON form.
    pub fn hash(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let canonical = serde_json::to_string(&value).expect("value serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAT: &str = r#"{
        "generator": {"kind": "heat", "modes": 8},
        "geometry": {"theta": 1.0},
        "stability_params": {"eps": 0.5, "p": 1.5, "s": 0.2, "M": 1.0},
        "ensemble": {"count": 4, "seed": 3}
    }"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = ExperimentConfig::from_json(HEAT).unwrap();
        assert_eq!(cfg.time_grid.n_times, 64);
        assert_eq!(cfg.region, ObservationRegion::full());
        assert_eq!(cfg.generator.build().unwrap().dim(), 8);
    }

    #[test]
    fn hash_ignores_formatting() {
        let a = ExperimentConfig::from_json(HEAT).unwrap();
        let compact: String = HEAT.split_whitespace().collect();
        let b = ExperimentConfig::from_json(&compact).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn matrix_file_shape_is_checked() {
        let bad = MatrixFile {
            n: 2,
            rows: vec![vec![1.0, 2.0]],
        };
        assert!(bad.to_matrix().is_err());
        let m = DMatrix::from_row_slice(2, 2, &[-1.0, 2.0, 0.0, -1.0]);
        assert_eq!(MatrixFile::from_matrix(&m).to_matrix().unwrap(), m);
    }
}
