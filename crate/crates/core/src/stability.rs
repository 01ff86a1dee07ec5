//! Logarithmic-convexity bounds and the incomplete-Gamma stability kernel.
//!
//! The kernel is `k(E) = ∫_0^1 E^{c t^φ} dt`, which for `0 < E < 1` equals
//! `(Γ(1/φ) - Γ(1/φ, -c log E)) / ((-c log E)^{1/φ} φ)`. It is evaluated
//! from `log E` through the scaled lower incomplete Gamma function, so
//! observation norms down to the bottom of the double range never form an
//! underflowing power.

use crate::conformal::StripGeometry;
use crate::error::{invalid, Error, Result};
use crate::specfun::{gamma, gamma_lower_scaled, GammaArgs};

/// Constants of the conditional stability estimate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StabilityParams {
    pub theta: f64,
    pub eps: f64,
    /// Radius of the admissible set.
    #[serde(rename = "M")]
    pub m: f64,
    pub p: f64,
    pub s: f64,
    #[serde(rename = "K", default = "one")]
    pub k: f64,
    #[serde(default)]
    pub kappa: f64,
    #[serde(default = "one")]
    pub kappa_obs: f64,
    #[serde(default = "one")]
    pub kappa_adm: f64,
}

fn one() -> f64 {
    1.0
}

impl StabilityParams {
    /// `K₀ = K e^{κθ}`.
    pub fn k0(&self) -> f64 {
        self.k * (self.kappa * self.theta).exp()
    }

    /// The `M`-dependent constant of the estimate, fixed to `M` itself.
    pub fn kappa_m(&self) -> f64 {
        self.m
    }

    /// `σ = κ_obs κ_M^{-1} e^{-κθ}`.
    pub fn sigma(&self) -> f64 {
        self.kappa_obs / self.kappa_m() * (-self.kappa * self.theta).exp()
    }
}

/// A violated constraint on [`StabilityParams`], named by the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamViolation {
    pub name: &'static str,
    pub message: String,
}

/// Every violated constraint; empty when the parameters are admissible.
pub fn validate_params(params: &StabilityParams) -> Vec<ParamViolation> {
    let mut out = Vec::new();
    let mut push = |name: &'static str, message: String| out.push(ParamViolation { name, message });
    let StabilityParams {
        theta,
        eps,
        m,
        p,
        s,
        k,
        kappa,
        kappa_obs,
        kappa_adm,
    } = *params;
    if !(theta > 0.0 && theta.is_finite()) {
        push("theta", format!("{theta} is not a positive time"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        push("eps", format!("{eps} is not in (0, 1)"));
    }
    if !(m > 0.0 && m.is_finite()) {
        push("M", format!("{m} is not positive"));
    }
    let p_max = 1.0 / (1.0 - eps);
    if !(p > 1.0 && p < p_max) {
        push("p", format!("{p} is not in (1, {p_max})"));
    }
    let s_max = 1.0 - 1.0 / p;
    if !(s > 0.0 && s < s_max) {
        push("s", format!("{s} is not in (0, {s_max})"));
    }
    if !(k >= 1.0 && k.is_finite()) {
        push("K", format!("{k} is below 1"));
    }
    if !(kappa >= 0.0 && kappa.is_finite()) {
        push("kappa", format!("{kappa} is negative"));
    }
    if !(kappa_obs > 0.0 && kappa_obs.is_finite()) {
        push("kappa_obs", format!("{kappa_obs} is not positive"));
    }
    if !(kappa_adm > 0.0 && kappa_adm.is_finite()) {
        push("kappa_adm", format!("{kappa_adm} is not positive"));
    }
    out
}

/// `K e^{κ(t - θw)} M^{1-w} ‖u(θ)‖^w`.
pub fn logconvexity_bound(
    t: f64,
    w_t: f64,
    m: f64,
    final_norm: f64,
    k: f64,
    kappa: f64,
    theta: f64,
) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(invalid("theta", format!("must be positive, got {theta}")));
    }
    if !(0.0..=theta).contains(&t) {
        return Err(invalid("t", format!("must lie in [0, {theta}], got {t}")));
    }
    if !(0.0..=1.0).contains(&w_t) {
        return Err(invalid("w_t", format!("must lie in [0, 1], got {w_t}")));
    }
    if !(m >= 0.0) {
        return Err(invalid(
            "M",
            format!("norm bound must be non-negative, got {m}"),
        ));
    }
    if !(final_norm >= 0.0) {
        return Err(invalid(
            "final_norm",
            format!("must be non-negative, got {final_norm}"),
        ));
    }
    if !(k > 0.0) || !(kappa >= 0.0) {
        return Err(invalid(
            "K",
            format!("need K > 0 and κ >= 0, got K = {k}, κ = {kappa}"),
        ));
    }
    Ok(k * (kappa * (t - theta * w_t)).exp() * m.powf(1.0 - w_t) * final_norm.powf(w_t))
}

fn check_kernel_shape(phi: f64, c: f64) -> Result<()> {
    if !(phi >= 1.0) || !phi.is_finite() {
        return Err(invalid("phi", format!("must be at least 1, got {phi}")));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(invalid("c", format!("must be positive, got {c}")));
    }
    Ok(())
}

/// The kernel at `E = e^{log_e}`, `log_e < 0`.
pub fn gamma_kernel_log(log_e: f64, phi: f64, c: f64) -> Result<f64> {
    check_kernel_shape(phi, c)?;
    if !(log_e < 0.0) {
        return Err(invalid("E", format!("log E must be negative, got {log_e}")));
    }
    let x = -c * log_e;
    Ok(gamma_lower_scaled(GammaArgs::new(1.0 / phi, x)?)? / phi)
}

/// `(Γ(1/φ) - Γ(1/φ, -c log E)) / ((-c log E)^{1/φ} φ)` for `0 < E < 1`.
pub fn gamma_kernel(e: f64, phi: f64, c: f64) -> Result<f64> {
    if !(e > 0.0 && e < 1.0) {
        return Err(invalid("E", format!("must lie in (0, 1), got {e}")));
    }
    gamma_kernel_log(e.ln(), phi, c)
}

/// Both forms of the stability right-hand side at one observation norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityRhs {
    /// `K₁ k(‖Cu‖)^{s/p}` with `c = c_ψ p`.
    pub exact: f64,
    /// `K₁ (Γ(1/φ) / ((-c_ψ p log ‖Cu‖)^{1/φ} φ))^{s/p}`.
    pub simplified: f64,
    /// `k(‖Cu‖)` itself.
    pub kernel: f64,
}

pub fn stability_rhs(
    obs_norm: f64,
    params: &StabilityParams,
    geom: &StripGeometry,
    k1: f64,
) -> Result<StabilityRhs> {
    if let Some(v) = validate_params(params).into_iter().next() {
        return Err(invalid(v.name, v.message));
    }
    if !(obs_norm > 0.0 && obs_norm < 1.0) {
        return Err(invalid(
            "obs_norm",
            format!("observation must be small, in (0, 1), got {obs_norm}"),
        ));
    }
    if !(k1 > 0.0) || !k1.is_finite() {
        return Err(invalid("K1", format!("must be positive, got {k1}")));
    }
    let phi = geom.phi();
    let c = geom.c_psi() * params.p;
    let log_obs = obs_norm.ln();
    let kernel = gamma_kernel_log(log_obs, phi, c)?;
    let expo = params.s / params.p;
    let simple_kernel = gamma(1.0 / phi) / ((-c * log_obs).powf(1.0 / phi) * phi);
    Ok(StabilityRhs {
        exact: k1 * kernel.powf(expo),
        simplified: k1 * simple_kernel.powf(expo),
        kernel,
    })
}

/// Consecutive differences of `r(x) = k(σx) / k(x)` over a grid.
pub fn r_monotone_residuals(c: f64, phi: f64, sigma: f64, grid: &[f64]) -> Result<Vec<f64>> {
    check_kernel_shape(phi, c)?;
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(invalid("sigma", format!("must be positive, got {sigma}")));
    }
    let upper = 1f64.min(1.0 / sigma);
    if grid.len() < 2 {
        return Err(Error::InvalidGrid("need at least two points".into()));
    }
    if grid.iter().any(|&x| !(x > 0.0 && x < upper)) {
        return Err(Error::InvalidGrid(format!(
            "points must lie in (0, {upper})"
        )));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidGrid(
            "points must be strictly increasing".into(),
        ));
    }
    let r = |x: f64| -> Result<f64> {
        if sigma == 1.0 {
            return Ok(1.0);
        }
        let lx = x.ln();
        Ok(gamma_kernel_log(sigma.ln() + lx, phi, c)? / gamma_kernel_log(lx, phi, c)?)
    };
    let values = grid.iter().map(|&x| r(x)).collect::<Result<Vec<_>>>()?;
    Ok(values.windows(2).map(|w| w[1] - w[0]).collect())
}
