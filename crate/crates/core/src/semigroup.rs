//! The Ornstein–Uhlenbeck semigroup through Kolmogorov's formula.
//!
//! `T(t)f(x) = E[f(e^{tB}x - Y)]` with `Y ~ N(0, 2 Q_t)`, written out as
//! `(4π)^{-N/2} det(Q_t)^{-1/2} ∫ e^{-¼⟨Q_t^{-1}y, y⟩} f(e^{tB}x - y) dy`.
//! The invariant measure is the Gaussian of covariance `2 Q_∞`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{invalid, Error, Result};
use crate::matfun::spectral_norm;
use crate::operators::{lyapunov_gramian, DriftSpec, Gramian};
use crate::quadrature::standard_normal_rule;

/// Default Gauss–Hermite nodes per dimension.
pub const DEFAULT_QUADRATURE_ORDER: usize = 40;

#[derive(Debug, Clone)]
pub struct OUModel {
    spec: DriftSpec,
    gramian: Gramian,
    q_inf_inv: DMatrix<f64>,
    q_inf_det: f64,
    quadrature_order: usize,
}

impl OUModel {
    pub fn new(spec: DriftSpec) -> Result<Self> {
        let gramian = lyapunov_gramian(&spec)?;
        let chol = gramian
            .q_inf
            .clone()
            .cholesky()
            .ok_or_else(|| invalid("q_inf", "stationary Gramian is not positive definite"))?;
        let q_inf_det = chol.determinant();
        let q_inf_inv = chol.inverse();
        Ok(Self {
            spec,
            gramian,
            q_inf_inv,
            q_inf_det,
            quadrature_order: DEFAULT_QUADRATURE_ORDER,
        })
    }

    pub fn with_quadrature_order(mut self, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(invalid("quadrature_order", "need at least one node"));
        }
        self.quadrature_order = order;
        Ok(self)
    }

    pub fn spec(&self) -> &DriftSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn gramian(&self) -> &Gramian {
        &self.gramian
    }

    pub fn quadrature_order(&self) -> usize {
        self.quadrature_order
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            })
        }
    }
}

/// `Q_t = ∫_0^t e^{sB} Q e^{sBᵀ} ds`.
///
/// For small `t` this is read off Van Loan's block exponential
/// `exp(t [[-B, Q], [0, Bᵀ]])`; once `‖e^{tB}‖² ≤ ½` the closed form
/// `Q_∞ - e^{tB} Q_∞ e^{tBᵀ}` is used instead, where the subtraction no
/// longer cancels badly.
pub fn gramian_t(model: &OUModel, t: f64) -> Result<DMatrix<f64>> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid(
            "t",
            format!("must be non-negative and finite, got {t}"),
        ));
    }
    let n = model.dim();
    if t == 0.0 {
        return Ok(DMatrix::zeros(n, n));
    }
    let b = model.spec.b();
    let e = (b * t).exp();
    let q_t = if spectral_norm(&e).powi(2) <= 0.5 {
        &model.gramian.q_inf - &e * &model.gramian.q_inf * e.transpose()
    } else {
        let mut c = DMatrix::zeros(2 * n, 2 * n);
        c.view_mut((0, 0), (n, n)).copy_from(&(-b));
        c.view_mut((0, n), (n, n)).copy_from(model.spec.q());
        c.view_mut((n, n), (n, n)).copy_from(&b.transpose());
        let big = (c * t).exp();
        let g = big.view((0, n), (n, n)).into_owned();
        let f = big.view((n, n), (n, n)).into_owned();
        f.transpose() * g
    };
    Ok((&q_t + q_t.transpose()) * 0.5)
}

/// Covariance factor and determinant of `Q_t`, or [`Error::SingularGramian`].
fn kernel_factor(model: &OUModel, t: f64) -> Result<(DMatrix<f64>, DMatrix<f64>, f64)> {
    if !(t > 0.0) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    let q_t = gramian_t(model, t)?;
    let threshold = f64::MIN_POSITIVE;
    let singular = |det: f64| Error::SingularGramian { t, det, threshold };
    let chol = q_t
        .clone()
        .cholesky()
        .ok_or_else(|| singular(q_t.determinant()))?;
    let det = chol.determinant();
    if !(det > threshold) {
        return Err(singular(det));
    }
    Ok((q_t, chol.l(), det))
}

/// The transition density `(4π)^{-N/2} det(Q_t)^{-1/2} e^{-¼⟨Q_t^{-1}y, y⟩}`.
pub fn kolmogorov_kernel(model: &OUModel, t: f64, y: &[f64]) -> Result<f64> {
    model.check_point(y)?;
    let (q_t, _, det) = kernel_factor(model, t)?;
    let n = model.dim() as f64;
    let y = DVector::from_column_slice(y);
    let quad = y.dot(&q_t.cholesky().expect("factor succeeded above").solve(&y));
    Ok((4.0 * PI).powf(-n / 2.0) / det.sqrt() * (-0.25 * quad).exp())
}

/// Tensor standard-normal rule in `dim` variables: points `z` and weights.
fn tensor_normal_rule(dim: usize, order: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    let rule = standard_normal_rule(order)?;
    let total = order
        .checked_pow(dim as u32)
        .ok_or_else(|| invalid("quadrature_order", "tensor rule is too large"))?;
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; dim];
    for _ in 0..total {
        let z = idx.iter().map(|&i| rule.nodes[i]).collect();
        let w = idx.iter().map(|&i| rule.weights[i]).product();
        out.push((z, w));
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < order {
                break;
            }
            *slot = 0;
        }
    }
    Ok(out)
}

/// `T(t) f` at each of the points `xs`, sharing one quadrature rule.
pub fn kolmogorov_apply_many(
    model: &OUModel,
    t: f64,
    f: impl Fn(&[f64]) -> f64,
    xs: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let (_, l, _) = kernel_factor(model, t)?;
    let n = model.dim();
    // Y = sqrt(2) L Z with Z standard normal
    let l = l * 2f64.sqrt();
    let rule = tensor_normal_rule(n, model.quadrature_order)?;
    let shifts: Vec<DVector<f64>> = rule
        .iter()
        .map(|(z, _)| &l * DVector::from_column_slice(z))
        .collect();
    let e = (model.spec.b() * t).exp();
    let mut point = vec![0.0; n];
    xs.iter()
        .map(|x| {
            model.check_point(x)?;
            let mean = &e * DVector::from_column_slice(x);
            let mut acc = 0.0;
            for ((_, w), y) in rule.iter().zip(&shifts) {
                for i in 0..n {
                    point[i] = mean[i] - y[i];
                }
                acc += w * f(&point);
            }
            Ok(acc)
        })
        .collect()
}

/// `T(t) f (x)` by Gauss–Hermite quadrature against the kernel.
pub fn kolmogorov_apply(
    model: &OUModel,
    t: f64,
    f: impl Fn(&[f64]) -> f64,
    x: &[f64],
) -> Result<f64> {
    Ok(kolmogorov_apply_many(model, t, f, &[x.to_vec()])?[0])
}

/// `ρ(x) = ((4π)^N det Q_∞)^{-1/2} e^{-¼⟨Q_∞^{-1}x, x⟩}`.
pub fn invariant_density(model: &OUModel, x: &[f64]) -> Result<f64> {
    model.check_point(x)?;
    let n = model.dim() as i32;
    let x = DVector::from_column_slice(x);
    let quad = x.dot(&(&model.q_inf_inv * &x));
    Ok(((4.0 * PI).powi(n) * model.q_inf_det).sqrt().recip() * (-0.25 * quad).exp())
}

/// `∫ f dμ` by tensor Gauss–Hermite quadrature.
pub fn invariant_mean(model: &OUModel, f: impl Fn(&[f64]) -> f64) -> Result<f64> {
    let n = model.dim();
    let l = model
        .gramian
        .q_inf
        .clone()
        .cholesky()
        .ok_or_else(|| invalid("q_inf", "stationary Gramian is not positive definite"))?
        .l()
        * 2f64.sqrt();
    let rule = tensor_normal_rule(n, model.quadrature_order)?;
    Ok(rule
        .iter()
        .map(|(z, w)| {
            let x = &l * DVector::from_column_slice(z);
            w * f(x.as_slice())
        })
        .sum())
}

/// Which quadratic form sits in the Gaussian weight of the `H^s_μ` norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SobolevWeight {
    /// `e^{-⅛⟨Q_∞^{-1}x, x⟩}`, matching the density of `μ`.
    #[default]
    InverseGramian,
    /// `e^{-⅛⟨Q_∞² x, x⟩}`.
    SquaredGramian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevOptions {
    pub weight: SobolevWeight,
    /// Grid points per dimension; `None` picks 256 in 1D and 128 otherwise.
    pub points_per_dim: Option<usize>,
    /// Half-width of the computational box; `None` sizes it from the weight.
    pub half_width: Option<f64>,
}

impl Default for SobolevOptions {
    fn default() -> Self {
        Self {
            weight: SobolevWeight::default(),
            points_per_dim: None,
            half_width: None,
        }
    }
}

/// `‖f · e^{-⅛⟨W x, x⟩}‖_{H^s(ℝ^N)}` with the flat Bessel-potential norm
/// `∫ (1 + |ξ|²)^s |ĝ(ξ)|² dξ / (2π)^N`, evaluated by FFT on a uniform grid.
///
/// At `s = 0` with the default weight this is
/// `((4π)^N det Q_∞)^{1/4} ‖f‖_{L²_μ}`.
pub fn weighted_sobolev_norm(
    model: &OUModel,
    s: f64,
    f: impl Fn(&[f64]) -> f64,
    options: SobolevOptions,
) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(invalid("s", format!("must be non-negative, got {s}")));
    }
    let n = model.dim();
    let w = match options.weight {
        SobolevWeight::InverseGramian => model.q_inf_inv.clone(),
        SobolevWeight::SquaredGramian => &model.gramian.q_inf * &model.gramian.q_inf,
    };
    let points = options
        .points_per_dim
        .unwrap_or(if n == 1 { 256 } else { 128 });
    if points < 4 {
        return Err(invalid("points_per_dim", "need at least four grid points"));
    }
    let total = points
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| invalid("points_per_dim", "grid is too large"))?;
    let half_width = match options.half_width {
        Some(r) if r > 0.0 => r,
        Some(r) => return Err(invalid("half_width", format!("must be positive, got {r}"))),
        None => {
            let lam_min = w.clone().symmetric_eigen().eigenvalues.min();
            (8.0 * 40.0 / lam_min).sqrt()
        }
    };
    let h = 2.0 * half_width / points as f64;
    let mut data = vec![Complex64::new(0.0, 0.0); total];
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    for cell in data.iter_mut() {
        for i in 0..n {
            x[i] = -half_width + h * idx[i] as f64;
        }
        let xv = DVector::from_column_slice(&x);
        let weight = (-0.125 * xv.dot(&(&w * &xv))).exp();
        *cell = Complex64::new(f(&x) * weight, 0.0);
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < points {
                break;
            }
            *slot = 0;
        }
    }
    fft_nd(&mut data, points, n);
    let dxi = 2.0 * PI / (points as f64 * h);
    let freq = |k: usize| {
        let k = if k < points.div_ceil(2) {
            k as f64
        } else {
            k as f64 - points as f64
        };
        k * dxi
    };
    let mut acc = 0.0;
    idx.iter_mut().for_each(|v| *v = 0);
    for g in &data {
        let xi2: f64 = idx.iter().map(|&k| freq(k).powi(2)).sum();
        acc += (1.0 + xi2).powf(s) * g.norm_sqr();
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < points {
                break;
            }
            *slot = 0;
        }
    }
    Ok((acc * (h / points as f64).powi(n as i32)).sqrt())
}

/// In-place forward FFT of an `N`-dimensional array stored with the first
/// axis fastest.
fn fft_nd(data: &mut [Complex64], points: usize, dims: usize) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(points);
    let mut line = vec![Complex64::new(0.0, 0.0); points];
    for axis in 0..dims {
        let stride = points.pow(axis as u32);
        let block = stride * points;
        for start in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for k in 0..points {
                    line[k] = data[base + k * stride];
                }
                fft.process(&mut line);
                for k in 0..points {
                    data[base + k * stride] = line[k];
                }
            }
        }
    }
}

/// Test functions selectable by name from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedFunction {
    /// `1`
    One,
    /// `x₁`
    Linear,
    /// `x₁²`
    Square,
    /// `x₁⁴ - x₁ x_N`
    Quartic,
    /// `e^{-|x|²}`
    Gaussian,
    /// `cos x₁`
    Cosine,
}

impl NamedFunction {
    pub const NAMES: [&'static str; 6] =
        ["one", "linear", "square", "quartic", "gaussian", "cosine"];

    pub fn eval(self, x: &[f64]) -> f64 {
        let x1 = x[0];
        match self {
            NamedFunction::One => 1.0,
            NamedFunction::Linear => x1,
            NamedFunction::Square => x1 * x1,
            NamedFunction::Quartic => x1.powi(4) - x1 * x[x.len() - 1],
            NamedFunction::Gaussian => (-x.iter().map(|v| v * v).sum::<f64>()).exp(),
            NamedFunction::Cosine => x1.cos(),
        }
    }
}

impl std::str::FromStr for NamedFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "one" => NamedFunction::One,
            "linear" => NamedFunction::Linear,
            "square" => NamedFunction::Square,
            "quartic" => NamedFunction::Quartic,
            "gaussian" => NamedFunction::Gaussian,
            "cosine" => NamedFunction::Cosine,
            other => {
                return Err(invalid(
                    "f",
                    format!(
                        "unknown test function {other:?}; expected one of {:?}",
                        Self::NAMES
                    ),
                ))
            }
        })
    }
}
