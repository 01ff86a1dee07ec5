//! Discrete observability and admissibility constants, and admissible initial data.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::region::{region_satisfies_cover, ObservationRegion};
use crate::error::{invalid, Error, Result};
use crate::operators::{Basis, DiscreteGenerator};
use crate::quadrature::trapezoid;

/// Singular values of the observation map below this count as zero.
pub const OBSERVATION_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservabilityOptions {
    /// Trapezoid nodes on `[0, θ]`.
    pub n_times: usize,
    /// Gauss–Hermite nodes per dimension for the spatial rule of a Hermite basis.
    pub resolution: usize,
}

impl Default for ObservabilityOptions {
    fn default() -> Self {
        Self {
            n_times: 64,
            resolution: 40,
        }
    }
}

/// Discrete observation operator and its constants.
#[derive(Debug, Clone)]
pub struct ObservabilityEstimate {
    /// `sup ‖e^{θA}u‖ / ‖Gu‖`.
    pub kappa_obs: f64,
    /// `‖G‖`.
    pub kappa_adm: f64,
    pub t_grid: Vec<f64>,
    /// Smallest singular value of `G`.
    pub conditioning: f64,
    /// Set when the region fails the net condition.
    pub warning: Option<String>,
    /// Stacked observation map: `‖G u‖² ≈ ∫_0^θ ‖𝟙_ω e^{tA} u‖² dt`.
    pub observation: DMatrix<f64>,
    /// `e^{θA}`.
    pub final_map: DMatrix<f64>,
}

impl ObservabilityEstimate {
    /// `(∫_0^θ ‖𝟙_ω u(t)‖² dt)^{1/2}` under the discrete time rule.
    pub fn observation_norm(&self, u0: &DVector<f64>) -> f64 {
        (&self.observation * u0).norm()
    }

    pub fn final_norm(&self, u0: &DVector<f64>) -> f64 {
        (&self.final_map * u0).norm()
    }
}

/// Radius beyond which Hermite-rule nodes are dropped from the mask.
fn truncation_radius(basis: &Basis) -> f64 {
    match basis {
        Basis::Sine { length, .. } => *length,
        Basis::Hermite(h) => {
            let s = h.factor() * h.factor().transpose();
            8.0 * s.symmetric_eigen().eigenvalues.max().sqrt()
        }
    }
}

/// Factor `R` with `‖R u‖² = ∫_ω |Σ u_k e_k|²`.
pub fn observation_factor(
    basis: &Basis,
    region: &ObservationRegion,
    resolution: usize,
) -> Result<DMatrix<f64>> {
    let (nodes, weights) = basis.inner_product_rule(resolution)?;
    let mask = region.mask(&nodes)?;
    let radius = truncation_radius(basis);
    let n = basis.len();
    let mut gram = DMatrix::<f64>::zeros(n, n);
    for ((x, w), inside) in nodes.iter().zip(&weights).zip(&mask) {
        let far = matches!(basis, Basis::Hermite(_))
            && x.iter().map(|v| v * v).sum::<f64>().sqrt() > radius;
        if *inside && !far {
            let v = basis.evaluate(x);
            gram.syger(*w, &v, &v, 1.0);
        }
    }
    let gram = (&gram + gram.transpose()) * 0.5;
    let eig = gram.symmetric_eigen();
    let root = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    Ok(DMatrix::from_diagonal(&root) * eig.eigenvectors.transpose())
}

/// Observability and admissibility constants with the default spatial rule.
pub fn estimate_observability(
    gen: &DiscreteGenerator,
    region: &ObservationRegion,
    theta: f64,
    n_times: usize,
) -> Result<ObservabilityEstimate> {
    estimate_observability_with(
        gen,
        region,
        theta,
        ObservabilityOptions {
            n_times,
            ..ObservabilityOptions::default()
        },
    )
}

/// Builds `G = [sqrt(τ_i) R e^{t_i A}]_i` on a trapezoid time grid and reads
/// `κ_adm = σ_max(G)` and `κ_obs = ‖e^{θA} V Σ^{-1}‖` from its SVD.
pub fn estimate_observability_with(
    gen: &DiscreteGenerator,
    region: &ObservationRegion,
    theta: f64,
    options: ObservabilityOptions,
) -> Result<ObservabilityEstimate> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(invalid("theta", format!("must be positive, got {theta}")));
    }
    let basis = gen.basis();
    let (nodes, _) = basis.inner_product_rule(options.resolution)?;
    let radius = truncation_radius(basis);
    let warning = if region_satisfies_cover(region, radius, &nodes)? {
        None
    } else {
        Some(format!(
            "region fails the net condition (r = {}, δ = {}); observability may still hold discretely",
            region.r, region.delta
        ))
    };
    let r = observation_factor(basis, region, options.resolution)?;
    let rule = trapezoid(options.n_times, 0.0, theta)?;
    let n = gen.dim();
    let mut g = DMatrix::<f64>::zeros(options.n_times * n, n);
    for (i, (&t, &tau)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let block = &r * gen.semigroup_matrix(t)? * tau.sqrt();
        g.view_mut((i * n, 0), (n, n)).copy_from(&block);
    }
    let final_map = gen.semigroup_matrix(theta)?;
    let svd = g.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
    let sigma = &svd.singular_values;
    let sigma_min = sigma.min();
    let kappa_adm = sigma.max();
    if !(sigma_min >= OBSERVATION_FLOOR) {
        return Err(Error::DegenerateObservation {
            sigma_min,
            floor: OBSERVATION_FLOOR,
        });
    }
    let mut scaled = v_t.transpose();
    for (j, s) in sigma.iter().enumerate() {
        scaled.column_mut(j).scale_mut(1.0 / s);
    }
    let kappa_obs = crate::matfun::spectral_norm(&(&final_map * scaled));
    Ok(ObservabilityEstimate {
        kappa_obs,
        kappa_adm,
        t_grid: rule.nodes,
        conditioning: sigma_min,
        warning,
        observation: g,
        final_map,
    })
}

/// Relative change of `κ_obs` when the trapezoid grid is refined from `n` to
/// `2n - 1` nodes (nested). Not monotone in general: the trapezoid rule
/// overestimates `∫ ‖𝟙_ω u(t)‖² dt` for decaying `u`.
pub fn kappa_obs_refinement(
    gen: &DiscreteGenerator,
    region: &ObservationRegion,
    theta: f64,
    options: ObservabilityOptions,
) -> Result<f64> {
    let coarse = estimate_observability_with(gen, region, theta, options)?.kappa_obs;
    let fine = ObservabilityOptions {
        n_times: 2 * options.n_times - 1,
        ..options
    };
    let fine = estimate_observability_with(gen, region, theta, fine)?.kappa_obs;
    Ok((fine - coarse).abs() / coarse)
}

/// `count` coefficient vectors with `‖(λ - A)^ε u‖` uniform on `[0, M]`:
/// isotropic Gaussian directions rescaled by a uniform fraction of `M`.
pub fn sample_admissible(
    gen: &DiscreteGenerator,
    eps: f64,
    m: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<DVector<f64>>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid("eps", format!("must lie in (0, 1), got {eps}")));
    }
    if !(m > 0.0) || !m.is_finite() {
        return Err(invalid("M", format!("must be positive, got {m}")));
    }
    let power = gen.fractional_power(eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = gen.dim();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let fraction: f64 = rng.random();
        let norm = (&power * &v).norm();
        if norm > 0.0 {
            out.push(v * (fraction * m / norm));
        }
    }
    Ok(out)
}
