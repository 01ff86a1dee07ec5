//! The harmonic weight `w` on the sector strip of angle `ψ` and final time `θ`.
//!
//! On the real segment `(0, θ]` the weight is `w(t) = h^{-1}(t) / θ`, where
//! `h = f ∘ g` composes `g(z) = θ sin²(πz / 2θ)` (rectangular strip onto the
//! upper half-plane) with the Schwarz–Christoffel map
//! `f(z) = (θ sin ψ / π) B_{z/θ}(ψ/π, 1 - ψ/π)` (half-plane onto the sector
//! strip). `h` is strictly increasing with `h(θ) = θ`, so `w` is recovered by a
//! bracketed root search.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Error, Result};
use crate::specfun::{beta_inc, BetaArgs};

/// Final time `θ` and analyticity angle `ψ`, with the derived exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripGeometry {
    theta: f64,
    psi: f64,
    phi: f64,
    c_psi: f64,
}

impl StripGeometry {
    pub fn new(theta: f64, psi: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(invalid(
                "theta",
                format!("final time must be positive, got {theta}"),
            ));
        }
        let (phi, c_psi) = angle_constants(psi)?;
        Ok(Self {
            theta,
            psi,
            phi,
            c_psi,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    /// `φ = π / (2ψ)`.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `c_ψ = (2/π) (ψ / sin ψ)^{π / 2ψ}`.
    pub fn c_psi(&self) -> f64 {
        self.c_psi
    }

    /// Default tolerance for [`w_real`]: `1e-12 θ`.
    pub fn default_tol(&self) -> f64 {
        1e-12 * self.theta
    }

    fn check_time(&self, name: &'static str, t: f64) -> Result<()> {
        if t > 0.0 && t <= self.theta {
            Ok(())
        } else {
            Err(invalid(
                name,
                format!("must lie in (0, θ] = (0, {}], got {t}", self.theta),
            ))
        }
    }
}

/// `(φ, c_ψ)` for an angle `ψ ∈ (0, π/2]`.
pub fn angle_constants(psi: f64) -> Result<(f64, f64)> {
    if !(psi > 0.0 && psi <= FRAC_PI_2) {
        return Err(invalid(
            "psi",
            format!("angle must lie in (0, π/2], got {psi}"),
        ));
    }
    if psi == FRAC_PI_2 {
        return Ok((1.0, 1.0));
    }
    let phi = PI / (2.0 * psi);
    let c_psi = (2.0 / PI) * (psi / psi.sin()).powf(phi);
    Ok((phi, c_psi))
}

/// Boundary map `h(x) = (θ sin ψ / π) B_{sin²(πx/2θ)}(ψ/π, 1 - ψ/π)` on `(0, θ]`.
pub fn boundary_map_h(x: f64, geom: &StripGeometry) -> Result<f64> {
    geom.check_time("x", x)?;
    Ok(h_unchecked(x, geom))
}

fn h_unchecked(x: f64, geom: &StripGeometry) -> f64 {
    let theta = geom.theta;
    if x >= theta {
        return theta;
    }
    if x <= 0.0 {
        return 0.0;
    }
    let a = geom.psi / PI;
    let y = (PI * x / (2.0 * theta)).sin().powi(2).min(1.0);
    // a in (0, 1/2] and y in [0, 1]: the arguments are always valid
    let b = beta_inc(BetaArgs::new(a, y).expect("valid beta arguments"))
        .expect("beta series converges on [0, 1/2]");
    theta * geom.psi.sin() / PI * b
}

/// Right-hand side of the power-law upper bound on `h`:
/// `θ^{1-2φ'} (sin ψ / ψ) (π^{2φ'} / 4^{φ'}) x^{2φ'}` with `φ' = ψ/π`.
pub fn boundary_map_upper_bound(x: f64, geom: &StripGeometry) -> Result<f64> {
    geom.check_time("x", x)?;
    let fp = geom.psi / PI;
    Ok(
        geom.theta.powf(1.0 - 2.0 * fp) * (geom.psi.sin() / geom.psi) * PI.powf(2.0 * fp)
            / 4f64.powf(fp)
            * x.powf(2.0 * fp),
    )
}

const ROOT_MAX_ITER: usize = 2000;

/// The harmonic weight `w(t) = h^{-1}(t) / θ` for real `t ∈ (0, θ]`.
///
/// Root search on `h(x) - t` over the bracket `(0, θ]`: Illinois false-position
/// steps, falling back to bisection whenever a step fails to shrink the
/// bracket by half. Stops when both the bracket width and the residual are
/// within `tol`, or when the bracket has collapsed to adjacent floats.
pub fn w_real(t: f64, geom: &StripGeometry, tol: f64) -> Result<f64> {
    geom.check_time("t", t)?;
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("must be positive, got {tol}")));
    }
    if geom.psi == FRAC_PI_2 {
        // h is the identity here
        return Ok(t / geom.theta);
    }
    if t == geom.theta {
        return Ok(1.0);
    }
    let x = invert_increasing(|x| h_unchecked(x, geom) - t, 0.0, geom.theta, tol)?;
    Ok(x / geom.theta)
}

fn invert_increasing(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa > 0.0 || fb < 0.0 {
        return Err(Error::NoConvergence {
            routine: "w_real bracket",
            iterations: 0,
        });
    }
    let mut side = 0i8;
    for _ in 0..ROOT_MAX_ITER {
        let width = b - a;
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        if b - a > 0.5 * width {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm < 0.0 {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
            side = 0;
        }
        let (best, resid) = if fa.abs() < fb.abs() {
            (a, fa)
        } else {
            (b, fb)
        };
        let collapsed = b - a <= 2.0 * f64::EPSILON * b.abs().max(f64::MIN_POSITIVE);
        if (b - a <= tol && resid.abs() <= tol) || collapsed {
            return Ok(best);
        }
    }
    Err(Error::NoConvergence {
        routine: "w_real",
        iterations: ROOT_MAX_ITER,
    })
}

/// Lower bound `c_ψ (t/θ)^φ` for the harmonic weight.
pub fn w_lower_bound(t: f64, geom: &StripGeometry) -> Result<f64> {
    geom.check_time("t", t)?;
    Ok(geom.c_psi * (t / geom.theta).powf(geom.phi))
}

/// One row of a tabulated weight: `t, w(t), c_ψ (t/θ)^φ, h(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSample {
    pub t: f64,
    pub w: f64,
    pub lower_bound: f64,
    pub h: f64,
}

/// Tabulate the weight on the uniform grid `t_i = iθ/n`, `i = 1..=n`.
pub fn tabulate(geom: &StripGeometry, n: usize, tol: f64) -> Result<Vec<WeightSample>> {
    if n == 0 {
        return Err(invalid("grid", "need at least one grid point"));
    }
    (1..=n)
        .map(|i| {
            let t = geom.theta * i as f64 / n as f64;
            Ok(WeightSample {
                t,
                w: w_real(t, geom, tol)?,
                lower_bound: w_lower_bound(t, geom)?,
                h: boundary_map_h(t, geom)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_at_right_angle_and_quarter() {
        assert_eq!(angle_constants(FRAC_PI_2).unwrap(), (1.0, 1.0));
        let (phi, c) = angle_constants(PI / 4.0).unwrap();
        assert!((phi - 2.0).abs() < 1e-15);
        assert!((c - PI / 4.0).abs() < 1e-15);
        assert!(angle_constants(0.0).is_err());
        assert!(angle_constants(FRAC_PI_2 + 1e-9).is_err());
    }

    #[test]
    fn c_psi_below_one_off_right_angle() {
        for k in 1..12 {
            let psi = FRAC_PI_2 * k as f64 / 12.0;
            let (phi, c) = angle_constants(psi).unwrap();
            assert!(phi > 1.0);
            assert!(c > 0.0 && c < 1.0, "c_psi = {c} at psi = {psi}");
        }
    }

    #[test]
    fn h_is_identity_at_right_angle() {
        let g = StripGeometry::new(2.0, FRAC_PI_2).unwrap();
        for &x in &[0.01, 0.5, 1.3, 2.0] {
            assert!((boundary_map_h(x, &g).unwrap() - x).abs() < 1e-14);
        }
    }

    #[test]
    fn h_hits_theta_at_endpoint() {
        for &psi in &[PI / 12.0, PI / 5.0, PI / 3.0] {
            let g = StripGeometry::new(1.7, psi).unwrap();
            assert!((boundary_map_h(1.7, &g).unwrap() - 1.7).abs() < 1e-14);
            let mid = boundary_map_h(0.85, &g).unwrap();
            assert!(mid > 0.0 && mid < 1.7);
        }
    }

    #[test]
    fn w_endpoints_and_domain() {
        let g = StripGeometry::new(1.0, PI / 4.0).unwrap();
        assert_eq!(w_real(1.0, &g, 1e-12).unwrap(), 1.0);
        let w = w_real(0.5, &g, 1e-12).unwrap();
        assert!(w >= PI / 16.0 && w <= 1.0);
        assert!(w_real(0.0, &g, 1e-12).is_err());
        assert!(w_real(1.5, &g, 1e-12).is_err());
        assert!(w_real(0.5, &g, 0.0).is_err());
    }

    #[test]
    fn lower_bound_direct_substitution() {
        let g = StripGeometry::new(1.0, PI / 3.0).unwrap();
        let expected = (2.0 / PI) * ((PI / 3.0) / (PI / 3.0).sin()).powf(1.5) * 0.5f64.powf(1.5);
        assert!((w_lower_bound(0.5, &g).unwrap() - expected).abs() < 1e-15);
        assert!((w_lower_bound(1.0, &g).unwrap() - g.c_psi()).abs() < 1e-15);
        let right = StripGeometry::new(3.0, FRAC_PI_2).unwrap();
        assert!((w_lower_bound(1.2, &right).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn tiny_times_resolve_tiny_weights() {
        let g = StripGeometry::new(1.0, PI / 12.0).unwrap();
        let t = 1.0 / 200.0;
        let w = w_real(t, &g, g.default_tol()).unwrap();
        assert!(w > 0.0);
        assert!((boundary_map_h(w, &g).unwrap() - t).abs() <= 10.0 * g.default_tol());
    }
}
