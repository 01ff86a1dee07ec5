//! End-to-end ensemble experiments and their CSV/JSON reports.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::observe::{
    estimate_observability_with, kappa_obs_refinement, sample_admissible, ObservabilityOptions,
};
use crate::conformal::{w_lower_bound, w_real, StripGeometry};
use crate::error::{invalid, Result};
use crate::operators::{fractional_norm, DiscreteGenerator};
use crate::stability::{gamma_kernel_log, logconvexity_bound, validate_params, StabilityParams};

/// Slack allowed before a record counts as a violation.
pub const VIOLATION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Logconvexity,
    Stability,
}

/// `‖u(t)‖` against the bound with `w` from the conformal map and with its
/// power-law lower bound substituted inside `M^{1-w} ‖u(θ)‖^w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogconvexityRecord {
    pub sample_id: usize,
    pub t: f64,
    pub w: f64,
    pub w_lower: f64,
    pub actual: f64,
    pub bound: f64,
    pub bound_surrogate: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityRecord {
    pub sample_id: usize,
    pub init_norm: f64,
    pub frac_norm: f64,
    pub obs_norm: f64,
    pub kernel: f64,
    /// `init_norm / kernel^{s/p}`.
    pub ratio: f64,
    #[serde(skip)]
    pub final_norm: f64,
    #[serde(skip)]
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogconvexitySummary {
    pub records: usize,
    pub violations: usize,
    pub surrogate_violations: usize,
    pub max_violation: f64,
    pub max_surrogate_violation: f64,
    pub min_ratio: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub kappa: f64,
    pub psi: f64,
    pub phi: f64,
    pub c_psi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeSummary {
    pub amplitude: f64,
    pub first_sample_id: usize,
    pub samples: usize,
    pub k1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilitySummary {
    #[serde(rename = "empirical_K1")]
    pub empirical_k1: f64,
    /// Largest `‖e^{θA}u₀‖ - κ_obs ‖G u₀‖` over the ensemble.
    pub max_violation: f64,
    pub kappa_obs: f64,
    pub kappa_adm: f64,
    /// Relative change of `κ_obs` under time-grid refinement.
    pub kappa_obs_refinement: f64,
    pub psi: f64,
    pub phi: f64,
    pub c_psi: f64,
    /// Largest `‖G u₀‖ - κ_adm ‖u₀‖`.
    pub max_admissibility_violation: f64,
    pub conditioning: f64,
    pub cover_warning: Option<String>,
    pub s_over_p: f64,
    pub skipped: usize,
    pub kernel_monotone: bool,
    pub amplitudes: Vec<AmplitudeSummary>,
    /// `max_α K₁(α) / K₁(α₀)` with `α₀` the first amplitude.
    pub sweep_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Summary {
    Logconvexity(LogconvexitySummary),
    Stability(StabilitySummary),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Records {
    Logconvexity(Vec<LogconvexityRecord>),
    Stability(Vec<StabilityRecord>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub mode: Mode,
    pub seed: u64,
    pub config_hash: String,
    pub summary: Summary,
    #[serde(skip)]
    pub records: Records,
    /// Set when the run stopped early; records cover the completed samples.
    pub error: Option<String>,
}

impl ExperimentReport {
    pub fn stability_summary(&self) -> Option<&StabilitySummary> {
        match &self.summary {
            Summary::Stability(s) => Some(s),
            Summary::Logconvexity(_) => None,
        }
    }

    pub fn logconvexity_summary(&self) -> Option<&LogconvexitySummary> {
        match &self.summary {
            Summary::Logconvexity(s) => Some(s),
            Summary::Stability(_) => None,
        }
    }

    /// Every row's ratio equals the value recomputed from its own columns.
    pub fn rows_consistent(&self) -> bool {
        match (&self.records, &self.summary) {
            (Records::Stability(rows), Summary::Stability(s)) => rows
                .iter()
                .all(|r| r.ratio == r.init_norm / r.kernel.powf(s.s_over_p)),
            (Records::Logconvexity(rows), _) => rows.iter().all(|r| r.ratio == r.bound / r.actual),
            _ => false,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# config_hash={} seed={}\n", self.config_hash, self.seed);
        match &self.records {
            Records::Stability(rows) => {
                out.push_str("sample_id,init_norm,frac_norm,obs_norm,kernel,ratio\n");
                for r in rows {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        r.sample_id, r.init_norm, r.frac_norm, r.obs_norm, r.kernel, r.ratio
                    );
                }
            }
            Records::Logconvexity(rows) => {
                out.push_str("sample_id,t,w,w_lower,actual,bound,bound_surrogate,ratio\n");
                for r in rows {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        r.sample_id,
                        r.t,
                        r.w,
                        r.w_lower,
                        r.actual,
                        r.bound,
                        r.bound_surrogate,
                        r.ratio
                    );
                }
            }
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "# error={e}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write(&self, csv: &Path, json: &Path) -> Result<()> {
        std::fs::write(csv, self.to_csv())?;
        std::fs::write(json, self.to_json())?;
        Ok(())
    }
}

/// Keep the records of the samples before the first failure.
fn split_partial<T>(results: Vec<Result<Vec<T>>>) -> (Vec<T>, Option<String>) {
    let mut out = Vec::new();
    for r in results {
        match r {
            Ok(rows) => out.extend(rows),
            Err(e) => return (out, Some(e.to_string())),
        }
    }
    (out, None)
}

fn geometry(cfg: &ExperimentConfig, gen: &DiscreteGenerator) -> Result<StripGeometry> {
    StripGeometry::new(cfg.geometry.theta, cfg.geometry.psi.unwrap_or(gen.angle()))
}

pub fn run_experiment(mode: Mode, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let gen = cfg.generator.build()?;
    run_experiment_with(mode, cfg, &gen)
}

/// Run against an already built generator (which must match `cfg.generator`
/// for the config hash to describe the run).
pub fn run_experiment_with(
    mode: Mode,
    cfg: &ExperimentConfig,
    gen: &DiscreteGenerator,
) -> Result<ExperimentReport> {
    match mode {
        Mode::Logconvexity => run_logconvexity(cfg, gen),
        Mode::Stability => run_stability(cfg, gen),
    }
}

fn run_logconvexity(cfg: &ExperimentConfig, gen: &DiscreteGenerator) -> Result<ExperimentReport> {
    let geom = geometry(cfg, gen)?;
    let theta = geom.theta();
    let n_eval = cfg.time_grid.n_eval;
    if n_eval == 0 {
        return Err(invalid(
            "time_grid.n_eval",
            "need at least one evaluation time",
        ));
    }
    let sp = &cfg.stability_params;
    let samples = sample_admissible(gen, sp.eps, sp.m, cfg.ensemble.count, cfg.ensemble.seed)?;
    let tol = geom.default_tol();
    let times: Vec<f64> = (1..=n_eval)
        .map(|j| theta * j as f64 / n_eval as f64)
        .collect();
    let weights = times
        .iter()
        .map(|&t| Ok((w_real(t, &geom, tol)?, w_lower_bound(t, &geom)?)))
        .collect::<Result<Vec<_>>>()?;
    let maps = times
        .iter()
        .map(|&t| gen.semigroup_matrix(t))
        .collect::<Result<Vec<DMatrix<f64>>>>()?;
    let final_map = gen.semigroup_matrix(theta)?;
    let (k, kappa) = (gen.sector_k(), gen.sector_kappa());

    let results: Vec<Result<Vec<LogconvexityRecord>>> = samples
        .par_iter()
        .enumerate()
        .map(|(id, u0)| {
            let m = u0.norm();
            let final_norm = (&final_map * u0).norm();
            times
                .iter()
                .zip(&weights)
                .zip(&maps)
                .map(|((&t, &(w, w_lower)), s)| {
                    let actual = (s * u0).norm();
                    let bound = logconvexity_bound(t, w, m, final_norm, k, kappa, theta)?;
                    let bound_surrogate = k
                        * (kappa * (t - theta * w)).exp()
                        * m.powf(1.0 - w_lower)
                        * final_norm.powf(w_lower);
                    Ok(LogconvexityRecord {
                        sample_id: id,
                        t,
                        w,
                        w_lower,
                        actual,
                        bound,
                        bound_surrogate,
                        ratio: bound / actual,
                    })
                })
                .collect()
        })
        .collect();
    let (rows, error) = split_partial(results);

    let excess = |r: &LogconvexityRecord, b: f64| r.actual - b;
    let summary = LogconvexitySummary {
        records: rows.len(),
        violations: rows
            .iter()
            .filter(|r| excess(r, r.bound) > VIOLATION_SLACK)
            .count(),
        surrogate_violations: rows
            .iter()
            .filter(|r| excess(r, r.bound_surrogate) > VIOLATION_SLACK)
            .count(),
        max_violation: rows
            .iter()
            .map(|r| excess(r, r.bound))
            .fold(f64::NEG_INFINITY, f64::max),
        max_surrogate_violation: rows
            .iter()
            .map(|r| excess(r, r.bound_surrogate))
            .fold(f64::NEG_INFINITY, f64::max),
        min_ratio: rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min),
        k,
        kappa,
        psi: geom.psi(),
        phi: geom.phi(),
        c_psi: geom.c_psi(),
    };
    Ok(ExperimentReport {
        mode: Mode::Logconvexity,
        seed: cfg.ensemble.seed,
        config_hash: cfg.hash(),
        summary: Summary::Logconvexity(summary),
        records: Records::Logconvexity(rows),
        error,
    })
}

fn run_stability(cfg: &ExperimentConfig, gen: &DiscreteGenerator) -> Result<ExperimentReport> {
    let geom = geometry(cfg, gen)?;
    let options = ObservabilityOptions {
        n_times: cfg.time_grid.n_times,
        resolution: cfg.time_grid.resolution,
    };
    let est = estimate_observability_with(gen, &cfg.region, geom.theta(), options)?;
    let refinement = kappa_obs_refinement(gen, &cfg.region, geom.theta(), options)?;
    let sp = &cfg.stability_params;
    let params = StabilityParams {
        theta: geom.theta(),
        eps: sp.eps,
        m: sp.m,
        p: sp.p,
        s: sp.s,
        k: gen.sector_k(),
        kappa: gen.sector_kappa(),
        kappa_obs: est.kappa_obs,
        kappa_adm: est.kappa_adm,
    };
    if let Some(v) = validate_params(&params).into_iter().next() {
        return Err(invalid(v.name, v.message));
    }
    let s_over_p = params.s / params.p;
    let c = geom.c_psi() * params.p;
    let phi = geom.phi();
    let samples = sample_admissible(gen, sp.eps, sp.m, cfg.ensemble.count, cfg.ensemble.seed)?;
    let count = samples.len();

    let jobs: Vec<(usize, f64, &DVector<f64>)> = cfg
        .ensemble
        .amplitudes
        .iter()
        .enumerate()
        .flat_map(|(a, &alpha)| {
            samples
                .iter()
                .enumerate()
                .map(move |(i, u)| (a * count + i, alpha, u))
        })
        .collect();
    let results: Vec<Result<Vec<StabilityRecord>>> = jobs
        .par_iter()
        .map(|&(id, alpha, u)| {
            let u0 = u * alpha;
            let obs_norm = est.observation_norm(&u0);
            if !(obs_norm > 0.0 && obs_norm < 1.0) {
                return Ok(Vec::new());
            }
            let init_norm = u0.norm();
            let kernel = gamma_kernel_log(obs_norm.ln(), phi, c)?;
            Ok(vec![StabilityRecord {
                sample_id: id,
                init_norm,
                frac_norm: fractional_norm(gen, sp.eps, &u0)?,
                obs_norm,
                kernel,
                ratio: init_norm / kernel.powf(s_over_p),
                final_norm: est.final_norm(&u0),
                amplitude: alpha,
            }])
        })
        .collect();
    let (rows, error) = split_partial(results);
    let skipped = if error.is_none() {
        jobs.len() - rows.len()
    } else {
        0
    };

    let amplitudes: Vec<AmplitudeSummary> = cfg
        .ensemble
        .amplitudes
        .iter()
        .enumerate()
        .map(|(a, &alpha)| {
            let first = a * count;
            let mine: Vec<&StabilityRecord> = rows
                .iter()
                .filter(|r| r.sample_id >= first && r.sample_id < first + count)
                .collect();
            AmplitudeSummary {
                amplitude: alpha,
                first_sample_id: first,
                samples: mine.len(),
                k1: mine.iter().map(|r| r.ratio).fold(0.0, f64::max),
            }
        })
        .collect();
    let base = amplitudes.first().map(|a| a.k1).unwrap_or(0.0);
    let top = amplitudes.iter().map(|a| a.k1).fold(0.0, f64::max);
    let mut by_obs: Vec<&StabilityRecord> = rows.iter().collect();
    by_obs.sort_by(|a, b| a.obs_norm.total_cmp(&b.obs_norm));
    let kernel_monotone = by_obs.windows(2).all(|w| {
        w[1].kernel > w[0].kernel || (w[1].obs_norm == w[0].obs_norm && w[1].kernel == w[0].kernel)
    });

    let summary = StabilitySummary {
        empirical_k1: rows.iter().map(|r| r.ratio).fold(0.0, f64::max),
        max_violation: rows
            .iter()
            .map(|r| r.final_norm - est.kappa_obs * r.obs_norm)
            .fold(f64::NEG_INFINITY, f64::max),
        kappa_obs: est.kappa_obs,
        kappa_adm: est.kappa_adm,
        kappa_obs_refinement: refinement,
        psi: geom.psi(),
        phi,
        c_psi: geom.c_psi(),
        max_admissibility_violation: rows
            .iter()
            .map(|r| r.obs_norm - est.kappa_adm * r.init_norm)
            .fold(f64::NEG_INFINITY, f64::max),
        conditioning: est.conditioning,
        cover_warning: est.warning.clone(),
        s_over_p,
        skipped,
        kernel_monotone,
        amplitudes,
        sweep_spread: if base > 0.0 {
            top / base
        } else {
            f64::INFINITY
        },
    };
    Ok(ExperimentReport {
        mode: Mode::Stability,
        seed: cfg.ensemble.seed,
        config_hash: cfg.hash(),
        summary: Summary::Stability(summary),
        records: Records::Stability(rows),
        error,
    })
}

impl Default for Records {
    fn default() -> Self {
        Records::Stability(Vec::new())
    }
}
