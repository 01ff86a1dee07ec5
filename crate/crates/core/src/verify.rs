//! A quick self-check of the library's invariants, suitable for a smoke
//! test after building on a new machine.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::conformal::{
    boundary_map_h, boundary_map_upper_bound, w_lower_bound, w_real, StripGeometry,
};
use crate::error::Result;
use crate::harness::{
    estimate_observability, run_experiment_with, sample_admissible, ExperimentConfig, Mode,
    ObservationRegion,
};
use crate::operators::{
    analyticity_angle, build_heat_generator, build_ou_generator, lyapunov_gramian, DriftSpec,
};
use crate::quadrature::integrate_adaptive;
use crate::semigroup::{kolmogorov_apply, OUModel};
use crate::specfun::{beta_inc, beta_lower_residual, gamma_upper, BetaArgs, GammaArgs};
use crate::stability::{gamma_kernel, r_monotone_residuals};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, worst: f64, limit: f64) -> Check {
    Check {
        name,
        passed: worst <= limit,
        detail: format!("worst {worst:.3e} (limit {limit:.1e})"),
    }
}

/// A stable `n × n` drift with eigenvalue real parts in `[-3, -0.1]`,
/// conjugated by a random near-identity matrix.
pub fn random_stable_drift(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let mut d = DMatrix::<f64>::zeros(n, n);
    let mut i = 0;
    while i < n {
        let re = -rng.random_range(0.1..3.0);
        if i + 1 < n && rng.random_bool(0.5) {
            let im = rng.random_range(0.1..2.0);
            d[(i, i)] = re;
            d[(i + 1, i + 1)] = re;
            d[(i, i + 1)] = im;
            d[(i + 1, i)] = -im;
            i += 2;
        } else {
            d[(i, i)] = re;
            i += 1;
        }
    }
    let noise = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let v = DMatrix::<f64>::identity(n, n) + noise * (0.3 / (n as f64).sqrt());
    match v.clone().try_inverse() {
        Some(v_inv) => &v * d * v_inv,
        None => d,
    }
}

fn specfun_checks(out: &mut Vec<Check>) -> Result<()> {
    let mut worst = 0.0f64;
    for k in 0..50 {
        let a = 0.02 + 0.96 * k as f64 / 49.0;
        let b = beta_inc(BetaArgs::new(a, 1.0)?)?;
        worst = worst.max((b * (PI * a).sin() - PI).abs());
    }
    out.push(check("beta reflection identity", worst, 1e-10));

    let mut worst = 0.0f64;
    for i in 1..=50 {
        for j in 1..=50 {
            let a = 0.5 * i as f64 / 50.0;
            let x = j as f64 / 50.0;
            worst = worst.max(-beta_lower_residual(BetaArgs::new(a, x)?)?);
        }
    }
    out.push(check("beta lower inequality", worst, 1e-10));

    let mut worst = 0.0f64;
    for &(a, x) in &[(0.3f64, 0.5f64), (1.0, 2.0), (2.5, 1.2), (0.7, 5.0)] {
        let h = 1e-5 * x;
        let fd = (gamma_upper(GammaArgs::new(a, x + h)?)?
            - gamma_upper(GammaArgs::new(a, x - h)?)?)
            / (2.0 * h);
        let exact = -x.powf(a - 1.0) * (-x).exp();
        worst = worst.max(((fd - exact) / exact).abs());
        let b = (a / 3.0f64).min(0.9);
        let y = x / 6.0;
        let fd = (beta_inc(BetaArgs::new(b, y + 1e-5 * y)?)?
            - beta_inc(BetaArgs::new(b, y - 1e-5 * y)?)?)
            / (2e-5 * y);
        let exact = y.powf(b - 1.0) * (1.0 - y).powf(-b);
        worst = worst.max(((fd - exact) / exact).abs());
    }
    out.push(check("incomplete gamma/beta derivatives", worst, 1e-6));
    Ok(())
}

fn conformal_checks(out: &mut Vec<Check>) -> Result<()> {
    let mut worst_w = f64::NEG_INFINITY;
    let mut worst_h = f64::NEG_INFINITY;
    for k in 1..=6 {
        let g = StripGeometry::new(1.0, PI * k as f64 / 12.0)?;
        for i in 1..=40 {
            let t = i as f64 / 40.0;
            worst_w = worst_w.max(w_lower_bound(t, &g)? - w_real(t, &g, g.default_tol())?);
            worst_h = worst_h.max(boundary_map_h(t, &g)? - boundary_map_upper_bound(t, &g)?);
        }
    }
    out.push(check("harmonic weight above power law", worst_w, 1e-9));
    out.push(check("boundary map below power law", worst_h, 1e-9));
    Ok(())
}

fn operator_checks(out: &mut Vec<Check>, rng: &mut ChaCha8Rng) -> Result<()> {
    let jordan = DriftSpec::new(DMatrix::from_row_slice(2, 2, &[-1.0, 2.0, 0.0, -1.0]))?;
    out.push(check(
        "angle of the Jordan drift",
        (analyticity_angle(&jordan)? - PI / 4.0).abs(),
        1e-10,
    ));
    let mut worst = 0.0f64;
    for k in 0..20 {
        let spec = DriftSpec::new(random_stable_drift(rng, 2 + k % 3))?;
        let g = lyapunov_gramian(&spec)?;
        worst = worst.max(g.residual(&spec) / crate::matfun::spectral_norm(spec.q()));
    }
    out.push(check("Lyapunov residual", worst, 1e-10));

    let gen = build_ou_generator(&jordan, 4)?;
    let a = gen.fractional_power(0.25)?;
    let b = gen.fractional_power(0.5)?;
    let ab = gen.fractional_power(0.75)?;
    out.push(check(
        "fractional power composition",
        (a * b - ab).amax(),
        1e-8,
    ));
    Ok(())
}

fn semigroup_checks(out: &mut Vec<Check>) -> Result<()> {
    let model = OUModel::new(DriftSpec::new(DMatrix::from_row_slice(
        2,
        2,
        &[-1.0, 2.0, 0.0, -1.0],
    ))?)?;
    let mut worst = 0.0f64;
    for &t in &[0.1, 1.0, 5.0] {
        worst = worst.max((kolmogorov_apply(&model, t, |_| 1.0, &[0.3, -0.8])? - 1.0).abs());
    }
    out.push(check("Markov property", worst, 1e-10));
    Ok(())
}

fn stability_checks(out: &mut Vec<Check>) -> Result<()> {
    let mut worst = 0.0f64;
    for &e in &[0.02f64, 0.3, 0.7, 0.97] {
        for &phi in &[1.0, 2.0, 3.0] {
            for &c in &[0.5, 2.0, 4.0] {
                let q = integrate_adaptive(|t| e.powf(c * t.powf(phi)), 0.0, 1.0, 1e-14, 1e-14)?;
                worst = worst.max((gamma_kernel(e, phi, c)? - q).abs());
            }
        }
    }
    out.push(check("kernel against quadrature", worst, 1e-9));

    let mut worst = 0.0f64;
    for &(sigma, sign) in &[(2.0, 1.0), (0.5, -1.0)] {
        let upper = 1f64.min(1.0 / sigma);
        let grid: Vec<f64> = (1..200).map(|i| upper * i as f64 / 200.0).collect();
        for d in r_monotone_residuals(1.0, 2.0, sigma, &grid)? {
            worst = worst.max(-sign * d);
        }
    }
    out.push(check("monotone correction ratio", worst, 1e-9));
    Ok(())
}

fn harness_checks(out: &mut Vec<Check>) -> Result<()> {
    let cfg = ExperimentConfig::from_json(
        r#"{
            "generator": {"kind": "heat", "modes": 16},
            "geometry": {"theta": 0.5},
            "stability_params": {"eps": 0.5, "p": 1.5, "s": 0.2, "M": 1.0},
            "ensemble": {"count": 20, "seed": 1},
            "time_grid": {"n_eval": 20}
        }"#,
    )?;
    let gen = cfg.generator.build()?;
    let report = run_experiment_with(Mode::Logconvexity, &cfg, &gen)?;
    let s = report
        .logconvexity_summary()
        .expect("log-convexity run yields its summary");
    out.push(check("heat log-convexity", s.violations as f64, 0.0));

    let heat = build_heat_generator(16, 1.0)?;
    let region = ObservationRegion::slabs(0, 0.5, 0.1, 0.05, 0.3)?;
    let est = estimate_observability(&heat, &region, 0.5, 64)?;
    let samples = sample_admissible(&heat, 0.5, 1.0, 50, 2)?;
    let worst = samples
        .iter()
        .map(|u| est.final_norm(u) - est.kappa_obs * est.observation_norm(u))
        .fold(f64::NEG_INFINITY, f64::max);
    out.push(check("discrete observability inequality", worst, 1e-9));
    Ok(())
}

/// Run every check; an `Err` means a check could not be evaluated at all.
pub fn run_all() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(20240607);
    specfun_checks(&mut out)?;
    conformal_checks(&mut out)?;
    operator_checks(&mut out, &mut rng)?;
    semigroup_checks(&mut out)?;
    stability_checks(&mut out)?;
    harness_checks(&mut out)?;
    Ok(out)
}
