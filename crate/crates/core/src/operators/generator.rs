//! Finite-dimensional generators: Galerkin matrices in an orthonormal basis,
//! with sector constants, a shift, and a lazily built spectral cache.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::drift::{analyticity_angle, lyapunov_gramian, DriftSpec};
use super::hermite::HermiteBasis;
use crate::error::{invalid, Error, Result};
use crate::matfun::{
    power_taylor, real_part, spectral_norm, spectral_norm_c, to_complex, CMatrix, Spectral,
    DEFAULT_CONDITION_BOUND,
};
use crate::quadrature::gauss_legendre;

/// Default cap on the Hermite basis size.
pub const DEFAULT_MAX_BASIS: usize = 1024;

/// The orthonormal basis the coefficient vectors refer to.
#[derive(Debug, Clone)]
pub enum Basis {
    /// `sqrt(2/L) sin(kπx/L)`, `k = 1..=modes`, on `(0, L)`.
    Sine { length: f64, modes: usize },
    /// Tensor Hermite polynomials orthonormal in `L²_μ`.
    Hermite(HermiteBasis),
}

impl Basis {
    pub fn len(&self) -> usize {
        match self {
            Basis::Sine { modes, .. } => *modes,
            Basis::Hermite(h) => h.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spatial_dim(&self) -> usize {
        match self {
            Basis::Sine { .. } => 1,
            Basis::Hermite(h) => h.spatial_dim(),
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> DVector<f64> {
        match self {
            Basis::Sine { length, modes } => {
                let c = (2.0 / length).sqrt();
                DVector::from_iterator(
                    *modes,
                    (1..=*modes).map(|k| c * (k as f64 * PI * x[0] / length).sin()),
                )
            }
            Basis::Hermite(h) => h.evaluate(x),
        }
    }

    /// Nodes and weights of a rule for the basis inner product, accurate
    /// for products of two basis functions. `resolution` is the number of
    /// Gauss–Hermite nodes per dimension for the Hermite basis and is
    /// ignored for the sine basis.
    pub fn inner_product_rule(&self, resolution: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
        match self {
            Basis::Sine { length, modes } => {
                let rule = gauss_legendre(4 * modes + 32, 0.0, *length)?;
                Ok((rule.nodes.iter().map(|&x| vec![x]).collect(), rule.weights))
            }
            Basis::Hermite(h) => h.measure_rule(resolution),
        }
    }

    /// Reconstruct `Σ c_k e_k(x)`.
    pub fn synthesize(&self, coeffs: &DVector<f64>, x: &[f64]) -> f64 {
        self.evaluate(x).dot(coeffs)
    }
}

/// Sampled fit of `‖e^{zA}‖ ≤ K e^{κ Re z}` over a sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorFit {
    pub k: f64,
    pub kappa: f64,
    /// Half-opening of the sampled rays.
    pub ray_angle: f64,
    /// `(z, ‖e^{zA}‖)` for every sampled point.
    pub samples: Vec<(Complex64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorFitOptions {
    pub points_per_ray: usize,
    /// Rays sit at `±(ψ - margin)`.
    pub margin: f64,
    /// Largest sampled `|z|`.
    pub horizon: f64,
}

impl Default for SectorFitOptions {
    fn default() -> Self {
        Self {
            points_per_ray: 64,
            margin: 0.05,
            horizon: 8.0,
        }
    }
}

/// What to do when the eigenvector matrix is too ill conditioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConditioningPolicy {
    /// Evaluate through Schur–Parlett.
    #[default]
    SchurParlett,
    /// Fail with [`Error::IllConditionedSpectrum`].
    Strict,
}

#[derive(Debug)]
pub struct DiscreteGenerator {
    matrix: DMatrix<f64>,
    lambda_shift: f64,
    sector_k: f64,
    sector_kappa: f64,
    angle: f64,
    basis: Basis,
    condition_bound: f64,
    policy: ConditioningPolicy,
    spectral: OnceLock<Spectral>,
    init: Mutex<()>,
}

impl Clone for DiscreteGenerator {
    fn clone(&self) -> Self {
        Self {
            matrix: self.matrix.clone(),
            lambda_shift: self.lambda_shift,
            sector_k: self.sector_k,
            sector_kappa: self.sector_kappa,
            angle: self.angle,
            basis: self.basis.clone(),
            condition_bound: self.condition_bound,
            policy: self.policy,
            spectral: self.spectral.clone(),
            init: Mutex::new(()),
        }
    }
}

/// Dirichlet Laplacian on `(0, length)` in the orthonormal sine basis.
pub fn build_heat_generator(n: usize, length: f64) -> Result<DiscreteGenerator> {
    if n < 2 {
        return Err(invalid("n", format!("need at least two modes, got {n}")));
    }
    if !(length > 0.0) || !length.is_finite() {
        return Err(invalid("length", format!("must be positive, got {length}")));
    }
    let diag = DVector::from_iterator(n, (1..=n).map(|k| -(k as f64 * PI / length).powi(2)));
    Ok(DiscreteGenerator::from_parts(
        DMatrix::from_diagonal(&diag),
        Basis::Sine { length, modes: n },
        FRAC_PI_2,
        1.0,
        0.0,
        0.0,
    ))
}

/// Hermite–Galerkin matrix of `div(Q∇) + Bx·∇` in `L²_μ` up to total degree `order`.
pub fn build_ou_generator(spec: &DriftSpec, order: usize) -> Result<DiscreteGenerator> {
    build_ou_generator_with(spec, order, DEFAULT_MAX_BASIS, SectorFitOptions::default())
}

pub fn build_ou_generator_with(
    spec: &DriftSpec,
    order: usize,
    max_dim: usize,
    fit: SectorFitOptions,
) -> Result<DiscreteGenerator> {
    if order == 0 {
        return Err(invalid("order", "Galerkin order must be at least 1"));
    }
    let gramian = lyapunov_gramian(spec)?;
    let psi = analyticity_angle(spec)?;
    let basis = HermiteBasis::new(&gramian.q_inf, order, max_dim)?;
    let matrix = basis.generator_matrix(spec.b(), spec.q());
    DiscreteGenerator::fitted(matrix, Basis::Hermite(basis), psi, fit)
}

impl DiscreteGenerator {
    fn from_parts(
        matrix: DMatrix<f64>,
        basis: Basis,
        angle: f64,
        sector_k: f64,
        sector_kappa: f64,
        lambda_shift: f64,
    ) -> Self {
        Self {
            matrix,
            lambda_shift,
            sector_k,
            sector_kappa,
            angle,
            basis,
            condition_bound: DEFAULT_CONDITION_BOUND,
            policy: ConditioningPolicy::default(),
            spectral: OnceLock::new(),
            init: Mutex::new(()),
        }
    }

    /// A generator from an arbitrary matrix. `K` and `κ` are fitted on
    /// rays at `±(angle - margin)` and the shift is `κ + 1`.
    pub fn fitted(
        matrix: DMatrix<f64>,
        basis: Basis,
        angle: f64,
        options: SectorFitOptions,
    ) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || matrix.ncols() != n {
            return Err(invalid(
                "matrix",
                "generator matrix must be square and non-empty",
            ));
        }
        if basis.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: basis.len(),
            });
        }
        if !(angle > 0.0 && angle <= FRAC_PI_2) {
            return Err(invalid(
                "angle",
                format!("must lie in (0, π/2], got {angle}"),
            ));
        }
        let mut g = Self::from_parts(matrix, basis, angle, 1.0, 0.0, 0.0);
        let fit = g.fit_sector(options)?;
        g.sector_k = fit.k;
        g.sector_kappa = fit.kappa;
        g.lambda_shift = fit.kappa + 1.0;
        Ok(g)
    }

    /// Replace the shift `λ`.
    pub fn with_shift(mut self, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(invalid(
                "lambda_shift",
                format!("must be non-negative, got {lambda}"),
            ));
        }
        self.lambda_shift = lambda;
        Ok(self)
    }

    pub fn with_condition_bound(mut self, bound: f64, policy: ConditioningPolicy) -> Self {
        self.condition_bound = bound;
        self.policy = policy;
        self.spectral = OnceLock::new();
        self
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn lambda_shift(&self) -> f64 {
        self.lambda_shift
    }

    pub fn sector_k(&self) -> f64 {
        self.sector_k
    }

    pub fn sector_kappa(&self) -> f64 {
        self.sector_kappa
    }

    /// Continuum angle of analyticity the generator was built for.
    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    /// The spectral cache, computed on first use.
    pub fn spectral(&self) -> Result<&Spectral> {
        if let Some(s) = self.spectral.get() {
            return Ok(s);
        }
        let _guard = self.init.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(s) = self.spectral.get() {
            return Ok(s);
        }
        let s = Spectral::new(&self.matrix, self.condition_bound)?;
        Ok(self.spectral.get_or_init(|| s))
    }

    fn check_len(&self, u: &DVector<f64>) -> Result<()> {
        if u.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.len(),
            })
        }
    }

    /// `e^{zA}` for complex `z`.
    pub fn semigroup_complex(&self, z: Complex64) -> Result<CMatrix> {
        let sp = self.spectral()?;
        if let Some(e) = sp.eigen() {
            let mut scaled = e.vectors.clone();
            for (j, mu) in e.values.iter().enumerate() {
                let f = (z * mu).exp();
                for i in 0..scaled.nrows() {
                    scaled[(i, j)] *= f;
                }
            }
            return Ok(scaled * &e.inverse);
        }
        Ok((to_complex(&self.matrix) * z).exp())
    }

    /// `e^{tA}` for real `t ≥ 0`.
    pub fn semigroup_matrix(&self, t: f64) -> Result<DMatrix<f64>> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(invalid("t", format!("must be non-negative, got {t}")));
        }
        if t == 0.0 {
            return Ok(DMatrix::identity(self.dim(), self.dim()));
        }
        let sp = self.spectral()?;
        if sp.eigen().is_some() {
            return Ok(real_part(&self.semigroup_complex(Complex64::new(t, 0.0))?));
        }
        Ok((&self.matrix * t).exp())
    }

    /// `(λ - A)^p` for `p ∈ [-1, 1]`.
    pub fn fractional_power(&self, p: f64) -> Result<DMatrix<f64>> {
        if !(-1.0..=1.0).contains(&p) {
            return Err(invalid("exponent", format!("must lie in [-1, 1], got {p}")));
        }
        let n = self.dim();
        let shifted = DMatrix::identity(n, n) * self.lambda_shift - &self.matrix;
        if p == 0.0 {
            return Ok(DMatrix::identity(n, n));
        }
        if p == 1.0 {
            return Ok(shifted);
        }
        let sp = self.spectral()?;
        if sp.eigen().is_none() && self.policy == ConditioningPolicy::Strict {
            return Err(Error::IllConditionedSpectrum {
                condition: sp.condition(),
                bound: sp.condition_bound(),
            });
        }
        let f = sp.function_of_shifted(self.lambda_shift, power_taylor(p))?;
        Ok(real_part(&f))
    }

    /// Largest real part of `σ(A - λ)`.
    pub fn shifted_abscissa(&self) -> Result<f64> {
        Ok(self
            .spectral()?
            .eigenvalues()
            .iter()
            .map(|z| z.re - self.lambda_shift)
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Sample `‖e^{zA}‖` on the rays `arg z = ±(ψ - margin)` and on the
    /// positive real axis, then fit `κ` by least squares on
    /// `log‖e^{zA}‖ ≈ log K + κ Re z` and raise `log K` to the envelope so the
    /// bound holds at every sample.
    pub fn fit_sector(&self, options: SectorFitOptions) -> Result<SectorFit> {
        if options.points_per_ray < 2 || !(options.horizon > 0.0) {
            return Err(invalid(
                "sector fit",
                "need at least two points per ray and a positive horizon",
            ));
        }
        let ray_angle = if self.angle > options.margin {
            self.angle - options.margin
        } else {
            0.5 * self.angle
        };
        let m = options.points_per_ray;
        let mut samples = Vec::with_capacity(3 * m);
        for arg in [ray_angle, -ray_angle, 0.0] {
            let dir = Complex64::from_polar(1.0, arg);
            for j in 1..=m {
                let z = dir * (options.horizon * j as f64 / m as f64);
                let norm = spectral_norm_c(&self.semigroup_complex(z)?);
                samples.push((z, norm));
            }
        }
        let xs: Vec<f64> = samples.iter().map(|(z, _)| z.re).collect();
        let ys: Vec<f64> = samples.iter().map(|(_, v)| v.ln()).collect();
        let count = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / count;
        let my = ys.iter().sum::<f64>() / count;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let kappa = if sxx > 0.0 { (sxy / sxx).max(0.0) } else { 0.0 };
        let log_k = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| y - kappa * x)
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(SectorFit {
            k: log_k.exp().max(1.0),
            kappa,
            ray_angle,
            samples,
        })
    }

    /// Largest violation of `‖e^{tA}‖ ≤ K e^{κt}` on a time grid (non-positive when it holds).
    pub fn sector_bound_excess(&self, t_grid: &[f64]) -> Result<f64> {
        let mut worst = f64::NEG_INFINITY;
        for &t in t_grid {
            let lhs = spectral_norm(&self.semigroup_matrix(t)?);
            worst = worst.max(lhs - self.sector_k * (self.sector_kappa * t).exp());
        }
        Ok(worst)
    }
}

/// `e^{tA} u`.
pub fn semigroup_apply(gen: &DiscreteGenerator, t: f64, u: &DVector<f64>) -> Result<DVector<f64>> {
    gen.check_len(u)?;
    if t == 0.0 {
        return Ok(u.clone());
    }
    Ok(gen.semigroup_matrix(t)? * u)
}

/// `‖(λ - A)^ε u‖`.
pub fn fractional_norm(gen: &DiscreteGenerator, eps: f64, u: &DVector<f64>) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(invalid("eps", format!("must lie in [0, 1], got {eps}")));
    }
    gen.check_len(u)?;
    if eps == 0.0 {
        return Ok(u.norm());
    }
    Ok((gen.fractional_power(eps)? * u).norm())
}

/// `max_t t^α ‖(λ - A)^α e^{t(A - λ)}‖` over the grid.
pub fn smoothing_constant(gen: &DiscreteGenerator, alpha: f64, t_grid: &[f64]) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    if t_grid.is_empty() || t_grid.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::InvalidGrid(
            "time grid must be non-empty and positive".into(),
        ));
    }
    let power = gen.fractional_power(alpha)?;
    let mut best = 0.0f64;
    for &t in t_grid {
        let s = &power * gen.semigroup_matrix(t)? * (-gen.lambda_shift * t).exp();
        best = best.max(t.powf(alpha) * spectral_norm(&s));
    }
    Ok(best)
}

/// Largest `α ∈ [0, π/2]` such that `e^{zA}` is a contraction for `|arg z| ≤ α`,
/// read off the numerical range: the Hermitian part of `e^{±iα} A` must be
/// negative semi-definite (up to `tol·‖A‖`). Returns `None` when even the
/// real semigroup fails to contract.
pub fn contractive_sector_angle(a: &DMatrix<f64>, tol: f64) -> Option<f64> {
    let n = a.nrows();
    let sym = (a + a.transpose()) * 0.5;
    let skew = (a - a.transpose()) * 0.5;
    let slack = tol * spectral_norm(a).max(f64::MIN_POSITIVE);
    let top = |alpha: f64| -> f64 {
        let h = CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(alpha.cos() * sym[(i, j)], alpha.sin() * skew[(i, j)])
        });
        h.symmetric_eigenvalues().max()
    };
    if top(0.0) > slack {
        return None;
    }
    if top(FRAC_PI_2) <= slack {
        return Some(FRAC_PI_2);
    }
    let (mut lo, mut hi) = (0.0, FRAC_PI_2);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if top(mid) <= slack {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}
