//! Dense matrix functions.
//!
//! A [`Spectral`] value holds the complex Schur form `A = Q T Q^H` of a real
//! square matrix and, when the eigenvector matrix is well conditioned, the
//! eigendecomposition `A = V Λ V^{-1}`. Functions of `s I - A` (for a real
//! shift `s`) are evaluated through the eigendecomposition when available,
//! and otherwise through a blocked Schur–Parlett recurrence: eigenvalues are
//! grouped into clusters, each diagonal block is handled by a Taylor series
//! about its mean, and coupling blocks come from triangular Sylvester
//! equations.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvector condition number above which the Schur–Parlett route is used.
pub const DEFAULT_CONDITION_BOUND: f64 = 1e8;

/// Eigenvalues closer than this share a Schur–Parlett block.
const CLUSTER_DELTA: f64 = 0.1;
const TAYLOR_MAX_TERMS: usize = 500;

#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: DVector<Complex64>,
    pub vectors: CMatrix,
    pub inverse: CMatrix,
}

#[derive(Debug, Clone)]
pub struct Spectral {
    q: CMatrix,
    t: CMatrix,
    eigen: Option<Eigen>,
    condition: f64,
    condition_bound: f64,
}

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Real part of a complex matrix; the imaginary part is expected to be rounding noise.
pub fn real_part(m: &CMatrix) -> DMatrix<f64> {
    m.map(|z| z.re)
}

pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

pub fn spectral_norm_c(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

fn is_symmetric(m: &DMatrix<f64>) -> bool {
    let scale = m.amax().max(f64::MIN_POSITIVE);
    (m - m.transpose()).amax() <= 1e-14 * scale
}

impl Spectral {
    pub fn new(a: &DMatrix<f64>, condition_bound: f64) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.ncols(),
            });
        }
        if is_symmetric(a) {
            let sym = a.clone().symmetric_eigen();
            let v = to_complex(&sym.eigenvectors);
            let vt = v.transpose();
            let vals = sym.eigenvalues.map(|x| Complex64::new(x, 0.0));
            return Ok(Self {
                q: v.clone(),
                t: CMatrix::from_diagonal(&vals),
                eigen: Some(Eigen {
                    values: vals,
                    vectors: v,
                    inverse: vt,
                }),
                condition: 1.0,
                condition_bound,
            });
        }
        let schur = nalgebra::linalg::Schur::try_new(to_complex(a), f64::EPSILON, 10_000).ok_or(
            Error::NoConvergence {
                routine: "complex Schur decomposition",
                iterations: 10_000,
            },
        )?;
        let (q, mut t) = schur.unpack();
        for j in 0..n {
            for i in (j + 1)..n {
                t[(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
        let resid = spectral_norm_c(&(&q * &t * q.adjoint() - to_complex(a)));
        if resid > 1e-10 * spectral_norm(a).max(1.0) {
            return Err(Error::NoConvergence {
                routine: "complex Schur triangularization",
                iterations: 10_000,
            });
        }
        let (eigen, condition) = eigen_from_schur(&q, &t);
        let eigen = if condition <= condition_bound {
            eigen
        } else {
            None
        };
        Ok(Self {
            q,
            t,
            eigen,
            condition,
            condition_bound,
        })
    }

    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    pub fn eigenvalues(&self) -> DVector<Complex64> {
        self.t.diagonal()
    }

    /// Condition number of the unit-column eigenvector matrix (∞ when defective).
    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn condition_bound(&self) -> f64 {
        self.condition_bound
    }

    pub fn eigen(&self) -> Option<&Eigen> {
        self.eigen.as_ref()
    }

    pub fn schur(&self) -> (&CMatrix, &CMatrix) {
        (&self.q, &self.t)
    }

    /// `f(shift I - A)` where `taylor(σ, k)` returns `f^{(k)}(σ) / k!`.
    ///
    /// `taylor(σ, 0)` is `f(σ)` and is all the eigendecomposition route needs.
    pub fn function_of_shifted(
        &self,
        shift: f64,
        taylor: impl Fn(Complex64, usize) -> Complex64,
    ) -> Result<CMatrix> {
        if let Some(e) = &self.eigen {
            let fvals = e
                .values
                .map(|mu| taylor(Complex64::new(shift, 0.0) - mu, 0));
            let mut scaled = e.vectors.clone();
            for (j, f) in fvals.iter().enumerate() {
                for i in 0..scaled.nrows() {
                    scaled[(i, j)] *= f;
                }
            }
            return Ok(scaled * &e.inverse);
        }
        let n = self.dim();
        let shifted_t = CMatrix::from_diagonal_element(n, n, Complex64::new(shift, 0.0)) - &self.t;
        let (q, ft) = schur_parlett(&self.q, shifted_t, &taylor)?;
        Ok(&q * ft * q.adjoint())
    }
}

/// Eigenvectors of an upper-triangular `T` by back substitution, mapped through `Q`.
fn eigen_from_schur(q: &CMatrix, t: &CMatrix) -> (Option<Eigen>, f64) {
    let n = t.nrows();
    if n == 0 {
        return (None, 1.0);
    }
    let small = f64::EPSILON * t.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let mut y = CMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                s += t[(i, j)] * y[(j, k)];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < small {
                d = Complex64::new(small, 0.0);
            }
            y[(i, k)] = -s / d;
        }
    }
    let mut v = q * y;
    for mut col in v.column_iter_mut() {
        let nrm = col.norm();
        if nrm > 0.0 && nrm.is_finite() {
            col.unscale_mut(nrm);
        }
    }
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return (None, f64::INFINITY);
    }
    let sv = v.singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if !condition.is_finite() {
        return (None, condition);
    }
    match v.clone().try_inverse() {
        Some(inverse) => (
            Some(Eigen {
                values: t.diagonal(),
                vectors: v,
                inverse,
            }),
            condition,
        ),
        None => (None, f64::INFINITY),
    }
}

/// Swap diagonal entries `k` and `k+1` of an upper-triangular `t` by a unitary
/// rotation, updating `q` so that `q t q^H` is unchanged.
fn swap_adjacent(q: &mut CMatrix, t: &mut CMatrix, k: usize) {
    let n = t.nrows();
    let t11 = t[(k, k)];
    let t22 = t[(k + 1, k + 1)];
    let t12 = t[(k, k + 1)];
    // eigenvector of the 2x2 block for t22
    let (v1, v2) = (t12, t22 - t11);
    let nrm = (v1.norm_sqr() + v2.norm_sqr()).sqrt();
    if nrm == 0.0 {
        return;
    }
    let (v1, v2) = (v1 / nrm, v2 / nrm);
    // G = [[v1, -conj(v2)], [v2, conj(v1)]]
    let g = [[v1, -v2.conj()], [v2, v1.conj()]];
    for j in 0..n {
        let a = t[(k, j)];
        let b = t[(k + 1, j)];
        t[(k, j)] = g[0][0].conj() * a + g[1][0].conj() * b;
        t[(k + 1, j)] = g[0][1].conj() * a + g[1][1].conj() * b;
    }
    for i in 0..n {
        let a = t[(i, k)];
        let b = t[(i, k + 1)];
        t[(i, k)] = a * g[0][0] + b * g[1][0];
        t[(i, k + 1)] = a * g[0][1] + b * g[1][1];
        let a = q[(i, k)];
        let b = q[(i, k + 1)];
        q[(i, k)] = a * g[0][0] + b * g[1][0];
        q[(i, k + 1)] = a * g[0][1] + b * g[1][1];
    }
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
    t[(k + 1, k)] = Complex64::new(0.0, 0.0);
}

/// Cluster labels: eigenvalues within `CLUSTER_DELTA` are linked transitively.
fn cluster_labels(eigs: &[Complex64]) -> Vec<usize> {
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut c = i;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (eigs[i] - eigs[j]).norm() <= CLUSTER_DELTA {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    // relabel roots in order of first appearance
    let mut label_of_root = vec![usize::MAX; n];
    let mut next = 0;
    (0..n)
        .map(|i| {
            let r = find(&mut parent, i);
            if label_of_root[r] == usize::MAX {
                label_of_root[r] = next;
                next += 1;
            }
            label_of_root[r]
        })
        .collect()
}

fn schur_parlett(
    q: &CMatrix,
    mut t: CMatrix,
    taylor: &impl Fn(Complex64, usize) -> Complex64,
) -> Result<(CMatrix, CMatrix)> {
    let n = t.nrows();
    let mut q = q.clone();
    let eigs: Vec<Complex64> = t.diagonal().iter().copied().collect();
    let mut labels = cluster_labels(&eigs);

    // bubble clusters into contiguous runs
    let mut swapped = true;
    while swapped {
        swapped = false;
        for k in 0..n.saturating_sub(1) {
            if labels[k] > labels[k + 1] {
                swap_adjacent(&mut q, &mut t, k);
                labels.swap(k, k + 1);
                swapped = true;
            }
        }
    }

    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || labels[k] != labels[start] {
            blocks.push((start, k));
            start = k;
        }
    }

    let mut f = CMatrix::zeros(n, n);
    for &(s, e) in &blocks {
        let block = t.view((s, s), (e - s, e - s)).into_owned();
        let fb = taylor_block(&block, taylor)?;
        f.view_mut((s, s), (e - s, e - s)).copy_from(&fb);
    }

    // block Parlett recurrence, one block column at a time
    for jb in 0..blocks.len() {
        let (js, je) = blocks[jb];
        for ib in (0..jb).rev() {
            let (is, ie) = blocks[ib];
            let tii = t.view((is, is), (ie - is, ie - is));
            let tjj = t.view((js, js), (je - js, je - js));
            let tij = t.view((is, js), (ie - is, je - js));
            let fii = f.view((is, is), (ie - is, ie - is));
            let fjj = f.view((js, js), (je - js, je - js));
            let mut rhs = fii * tij - tij * fjj;
            for &(ks, ke) in &blocks[ib + 1..jb] {
                let fik = f.view((is, ks), (ie - is, ke - ks));
                let tkj = t.view((ks, js), (ke - ks, je - js));
                let tik = t.view((is, ks), (ie - is, ke - ks));
                let fkj = f.view((ks, js), (ke - ks, je - js));
                rhs += fik * tkj - tik * fkj;
            }
            let x = triangular_sylvester(&tii.into_owned(), &tjj.into_owned(), &rhs);
            f.view_mut((is, js), (ie - is, je - js)).copy_from(&x);
        }
    }
    Ok((q, f))
}

/// Solve `A X - X B = C` with `A`, `B` upper triangular and disjoint spectra.
fn triangular_sylvester(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> CMatrix {
    let (m, p) = (a.nrows(), b.nrows());
    let mut x = CMatrix::zeros(m, p);
    for col in 0..p {
        let mut rhs: DVector<Complex64> = c.column(col).into_owned();
        for r in 0..col {
            let coef = b[(r, col)];
            for i in 0..m {
                rhs[i] += x[(i, r)] * coef;
            }
        }
        let shift = b[(col, col)];
        for i in (0..m).rev() {
            let mut s = rhs[i];
            for k in (i + 1)..m {
                s -= a[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = s / (a[(i, i)] - shift);
        }
    }
    x
}

/// Taylor expansion of `f` about the mean eigenvalue of an upper-triangular block.
fn taylor_block(
    block: &CMatrix,
    taylor: &impl Fn(Complex64, usize) -> Complex64,
) -> Result<CMatrix> {
    let m = block.nrows();
    let sigma = block.diagonal().iter().sum::<Complex64>() / m as f64;
    let nmat = block - CMatrix::from_diagonal_element(m, m, sigma);
    let mut power = CMatrix::identity(m, m);
    let mut result = CMatrix::from_diagonal_element(m, m, taylor(sigma, 0));
    let mut quiet = 0;
    for k in 1..TAYLOR_MAX_TERMS {
        power = &power * &nmat;
        let term = &power * taylor(sigma, k);
        result += &term;
        let tnorm = term.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let rnorm = result.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !rnorm.is_finite() {
            break;
        }
        if k >= m && tnorm <= f64::EPSILON * rnorm {
            quiet += 1;
            if quiet >= 2 {
                return Ok(result);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NoConvergence {
        routine: "Schur-Parlett Taylor block",
        iterations: TAYLOR_MAX_TERMS,
    })
}

/// `f^{(k)}(σ) / k!` for `f(x) = x^p` (principal branch).
pub fn power_taylor(p: f64) -> impl Fn(Complex64, usize) -> Complex64 {
    move |sigma: Complex64, k: usize| {
        let mut binom = 1.0;
        for i in 0..k {
            binom *= (p - i as f64) / (i as f64 + 1.0);
        }
        if binom == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        sigma.powf(p - k as f64) * binom
    }
}

/// `f^{(k)}(σ) / k!` for `f(x) = e^{-t x}`.
pub fn exp_taylor(t: f64) -> impl Fn(Complex64, usize) -> Complex64 {
    move |sigma: Complex64, k: usize| {
        let mut c = 1.0;
        for i in 0..k {
            c *= -t / (i as f64 + 1.0);
        }
        (-sigma * t).exp() * c
    }
}
