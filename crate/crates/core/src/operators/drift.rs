//! Drift and diffusion matrices, the stationary Gramian and the analyticity angle.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::matfun::spectral_norm;

/// Drift `B` and diffusion `Q` of `A = div(Q∇) + Bx·∇`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftSpec {
    b: DMatrix<f64>,
    q: DMatrix<f64>,
}

impl DriftSpec {
    /// Drift with identity diffusion (`A = Δ + Bx·∇`).
    pub fn new(b: DMatrix<f64>) -> Result<Self> {
        let n = b.nrows();
        Self::with_diffusion(b, DMatrix::identity(n, n))
    }

    pub fn with_diffusion(b: DMatrix<f64>, q: DMatrix<f64>) -> Result<Self> {
        let n = b.nrows();
        if n == 0 || b.ncols() != n {
            return Err(invalid(
                "b",
                format!(
                    "drift must be square and non-empty, got {}x{}",
                    n,
                    b.ncols()
                ),
            ));
        }
        if q.nrows() != n || q.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: q.nrows(),
            });
        }
        if b.iter().chain(q.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("b", "entries must be finite"));
        }
        let scale = q.amax().max(f64::MIN_POSITIVE);
        if (&q - q.transpose()).amax() > 1e-12 * scale {
            return Err(invalid("q", "diffusion must be symmetric"));
        }
        if q.clone().cholesky().is_none() {
            return Err(invalid("q", "diffusion must be positive definite"));
        }
        Ok(Self { b, q })
    }

    pub fn dim(&self) -> usize {
        self.b.nrows()
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    /// Largest real part over the spectrum of `B`.
    pub fn spectral_abscissa(&self) -> f64 {
        self.b
            .complex_eigenvalues()
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Fails with [`Error::UnstableDrift`] unless `σ(B)` lies in the open left half-plane.
    pub fn require_stable(&self) -> Result<()> {
        let max_real_part = self.spectral_abscissa();
        if max_real_part < 0.0 {
            Ok(())
        } else {
            Err(Error::UnstableDrift { max_real_part })
        }
    }
}

/// Stationary Gramian `Q_∞ = ∫_0^∞ e^{sB} Q e^{sBᵀ} ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gramian {
    pub q_inf: DMatrix<f64>,
}

impl Gramian {
    /// `‖B Q_∞ + Q_∞ Bᵀ + Q‖₂`.
    pub fn residual(&self, spec: &DriftSpec) -> f64 {
        let b = spec.b();
        spectral_norm(&(b * &self.q_inf + &self.q_inf * b.transpose() + spec.q()))
    }
}

/// Solve `B X + X Bᵀ = -Q` through its Kronecker form, with one step of
/// iterative refinement. Dense in `N²`, which is fine for desk-scale `N`.
pub fn lyapunov_gramian(spec: &DriftSpec) -> Result<Gramian> {
    spec.require_stable()?;
    let n = spec.dim();
    let b = spec.b();
    let nn = n * n;
    // column-major vec: vec(BX) = (I ⊗ B) vec X, vec(X Bᵀ) = (B ⊗ I) vec X
    let mut k = DMatrix::<f64>::zeros(nn, nn);
    for j in 0..n {
        for i in 0..n {
            let row = i + j * n;
            for m in 0..n {
                k[(row, m + j * n)] += b[(i, m)];
                k[(row, i + m * n)] += b[(j, m)];
            }
        }
    }
    let rhs = -nalgebra::DVector::from_column_slice(spec.q().as_slice());
    let lu = k.clone().lu();
    let mut x = lu.solve(&rhs).ok_or(Error::UnstableDrift {
        max_real_part: spec.spectral_abscissa(),
    })?;
    let r = &rhs - &k * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    let xm = DMatrix::from_column_slice(n, n, x.as_slice());
    let q_inf = (&xm + xm.transpose()) * 0.5;
    Ok(Gramian { q_inf })
}

/// Angle data of the Ornstein–Uhlenbeck semigroup on `L²_μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleDetails {
    /// Optimal analyticity angle `ψ = arccot γ`.
    pub psi: f64,
    /// `γ = 2 ‖½ I + Q^{-1/2} Q_∞ Bᵀ Q^{-1/2}‖₂`.
    pub gamma: f64,
    pub gramian: Gramian,
}

/// `Q^{-1/2}` for a symmetric positive-definite `Q`.
pub fn inverse_sqrt_spd(q: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = q.clone().symmetric_eigen();
    let d = eig.eigenvalues.map(|l| 1.0 / l.sqrt());
    &eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.transpose()
}

pub fn angle_details(spec: &DriftSpec) -> Result<AngleDetails> {
    let gramian = lyapunov_gramian(spec)?;
    let n = spec.dim();
    let is_identity = (spec.q() - DMatrix::<f64>::identity(n, n)).amax() == 0.0;
    let core = &gramian.q_inf * spec.b().transpose();
    let core = if is_identity {
        core
    } else {
        let r = inverse_sqrt_spd(spec.q());
        &r * core * &r
    };
    let gamma = 2.0 * spectral_norm(&(DMatrix::identity(n, n) * 0.5 + core));
    // arccot γ; exactly π/2 at γ = 0
    let psi = 1f64.atan2(gamma);
    Ok(AngleDetails {
        psi,
        gamma,
        gramian,
    })
}

/// Optimal analyticity angle `ψ` with `cot ψ = γ`.
pub fn analyticity_angle(spec: &DriftSpec) -> Result<f64> {
    Ok(angle_details(spec)?.psi)
}

/// `ψ = π/2 - arctan γ`, the complementary form of `arccot γ`.
pub fn angle_from_spectral_angle(gamma: f64) -> f64 {
    FRAC_PI_2 - gamma.atan()
}
