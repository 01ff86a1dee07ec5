//! Independent oracles for the integration tests. Nothing here calls into
//! the numerical core of the library.

#![allow(dead_code)]

use nalgebra::DMatrix;

/// Adaptive Simpson with Richardson correction.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `∫_a^b` of an integrand with integrable endpoint singularities, by the
/// tanh-sinh rule. The integrand receives `(x, x - a, b - x)` with both
/// distances computed without cancellation.
pub fn tanh_sinh(f: &dyn Fn(f64, f64, f64) -> f64, a: f64, b: f64) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    let half = 0.5 * (b - a);
    let h = 1.0 / 64.0;
    let mut sum = 0.0;
    for k in -400i32..=400 {
        let t = k as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        let cosh_u = u.cosh();
        // distance of the node to the nearer endpoint, computed without cancellation
        let gap = half / (u.abs().exp() * cosh_u);
        if gap < 1e-300 {
            continue;
        }
        let (x, da, db) = if u < 0.0 {
            (a + gap, gap, 2.0 * half - gap)
        } else {
            (b - gap, 2.0 * half - gap, gap)
        };
        let w = half * FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
        sum += w * f(x, da, db);
    }
    sum * h
}

/// Maclaurin series for erf; accurate to machine precision for |x| ≤ 3.
pub fn erf(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let x2 = x * x;
    for n in 1..200 {
        term *= -x2 / n as f64;
        let add = term / (2 * n + 1) as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

fn simpson_matrix_integral(b: &DMatrix<f64>, q: &DMatrix<f64>, t_end: Option<f64>) -> DMatrix<f64> {
    // ∫ e^{sB} Q e^{sBᵀ} ds by composite Simpson, stepping e^{sB} by
    // repeated multiplication with e^{hB}.
    let h = 0.0025;
    let step = (b * h).exp();
    let n = b.nrows();
    let mut p = DMatrix::<f64>::identity(n, n);
    let mut total = DMatrix::<f64>::zeros(n, n);
    let mut k = 0usize;
    let integrand = |p: &DMatrix<f64>| p * q * p.transpose();
    let mut f0 = integrand(&p);
    loop {
        let p1 = &step * &p;
        let p2 = &step * &p1;
        let f1 = integrand(&p1);
        let f2 = integrand(&p2);
        total += (&f0 + &f1 * 4.0 + &f2) * (h / 3.0);
        p = p2;
        f0 = f2;
        k += 2;
        let s = k as f64 * h;
        match t_end {
            Some(t) if s >= t - 1e-12 => break,
            None if f0.norm() <= 1e-16 * total.norm() => break,
            _ => {}
        }
        assert!(s < 5000.0, "oracle integral did not settle");
    }
    total
}

/// `Q_∞ = ∫_0^∞ e^{sB} Q e^{sBᵀ} ds`.
pub fn lyapunov_by_quadrature(b: &DMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
    simpson_matrix_integral(b, q, None)
}

/// `Q_t`; `t` must be a multiple of 0.005.
pub fn gramian_t_by_quadrature(b: &DMatrix<f64>, q: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
    simpson_matrix_integral(b, q, Some(t))
}

/// Gaussian `N(m, S)` moments of the named polynomial test functions.
pub fn gaussian_expectation(name: &str, m: &[f64], s: &DMatrix<f64>) -> f64 {
    let n = m.len();
    match name {
        "one" => 1.0,
        "linear" => m[0],
        "square" => m[0] * m[0] + s[(0, 0)],
        "quartic" => {
            let (m1, v) = (m[0], s[(0, 0)]);
            m1.powi(4) + 6.0 * m1 * m1 * v + 3.0 * v * v - (m1 * m[n - 1] + s[(0, n - 1)])
        }
        other => panic!("no closed form for {other}"),
    }
}

/// The `count` eigenvalues of largest value of the second-difference Dirichlet
/// Laplacian on `(0, length)` with `n` interior points, in decreasing order,
/// by Sturm-sequence bisection.
pub fn fd_laplacian_eigenvalues(n: usize, length: f64, count: usize) -> Vec<f64> {
    let h = length / (n + 1) as f64;
    let (diag, off) = (-2.0 / (h * h), 1.0 / (h * h));
    // number of eigenvalues strictly below x
    let below = |x: f64| {
        let mut d = 1.0f64;
        let mut negatives = 0;
        for i in 0..n {
            d = diag - x - if i == 0 { 0.0 } else { off * off / d };
            if d == 0.0 {
                d = -1e-300;
            }
            if d < 0.0 {
                negatives += 1;
            }
        }
        negatives
    };
    (0..count)
        .map(|k| {
            let target = n - k; // eigenvalue with exactly n - k - 1 below it
            let (mut lo, mut hi) = (4.0 * diag, 0.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if below(mid) >= target {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// `n` equally spaced interior points of `(a, b)`.
pub fn interior_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| a + (b - a) * i as f64 / (n + 1) as f64)
        .collect()
}

/// `n` points of `(0, top]` ending at `top`.
pub fn right_closed_grid(top: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| top * i as f64 / n as f64).collect()
}
