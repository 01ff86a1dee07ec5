//! Orthonormal Hermite polynomials of the invariant Gaussian measure.
//!
//! With `Σ = 2 Q_∞ = L Lᵀ` and `z = L^{-1} x`, the invariant measure becomes
//! the standard normal in `z`, and the products
//! `h_α(z) = Π_i He_{α_i}(z_i) / sqrt(α_i!)` form an orthonormal basis of
//! `L²_μ`. Polynomials of total degree at most `m` are an invariant subspace
//! of the Ornstein–Uhlenbeck generator, so the Galerkin matrix on that span is
//! the exact restriction.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::quadrature::standard_normal_rule;

/// Multi-indices of total degree `<= order` in `dim` variables, graded by degree.
pub fn graded_indices(dim: usize, order: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for deg in 0..=order {
        let mut cur = vec![0; dim];
        fill_degree(&mut out, &mut cur, 0, deg);
    }
    out
}

fn fill_degree(out: &mut Vec<Vec<usize>>, cur: &mut [usize], pos: usize, remaining: usize) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(cur.to_vec());
        return;
    }
    for k in (0..=remaining).rev() {
        cur[pos] = k;
        fill_degree(out, cur, pos + 1, remaining - k);
    }
}

/// `binom(dim + order, dim)` without overflow for moderate inputs.
pub fn basis_dimension(dim: usize, order: usize) -> usize {
    let mut r: u128 = 1;
    for i in 1..=dim as u128 {
        r = r * (order as u128 + i) / i;
    }
    usize::try_from(r).unwrap_or(usize::MAX)
}

/// Values `h_0(z), ..., h_m(z)` of the normalized probabilists' Hermite polynomials.
pub fn hermite_normalized(z: f64, m: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(m + 1);
    h.push(1.0);
    if m >= 1 {
        h.push(z);
    }
    for k in 1..m {
        let kf = k as f64;
        let next = (z * h[k] - kf.sqrt() * h[k - 1]) / (kf + 1.0).sqrt();
        h.push(next);
    }
    h
}

#[derive(Debug, Clone)]
pub struct HermiteBasis {
    order: usize,
    indices: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
    chol: DMatrix<f64>,
    chol_inv: DMatrix<f64>,
}

impl HermiteBasis {
    /// Basis for the Gaussian `N(0, 2 Q_∞)` up to total degree `order`.
    pub fn new(q_inf: &DMatrix<f64>, order: usize, max_dim: usize) -> Result<Self> {
        let n = q_inf.nrows();
        if n == 0 || q_inf.ncols() != n {
            return Err(invalid("q_inf", "Gramian must be square and non-empty"));
        }
        let dim = basis_dimension(n, order);
        if dim > max_dim {
            return Err(Error::BasisOverflow { dim, max: max_dim });
        }
        let chol = (q_inf * 2.0)
            .cholesky()
            .ok_or_else(|| invalid("q_inf", "Gramian must be positive definite"))?
            .l();
        let chol_inv = chol
            .clone()
            .try_inverse()
            .ok_or_else(|| invalid("q_inf", "Gramian factor is singular"))?;
        let indices = graded_indices(n, order);
        let lookup = indices
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        Ok(Self {
            order,
            indices,
            lookup,
            chol,
            chol_inv,
        })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn spatial_dim(&self) -> usize {
        self.chol.nrows()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn indices(&self) -> &[Vec<usize>] {
        &self.indices
    }

    pub fn position(&self, alpha: &[usize]) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    /// Lower Cholesky factor `L` of `2 Q_∞`.
    pub fn factor(&self) -> &DMatrix<f64> {
        &self.chol
    }

    pub fn factor_inverse(&self) -> &DMatrix<f64> {
        &self.chol_inv
    }

    /// All basis functions at a standardized point `z`.
    pub fn evaluate_standard(&self, z: &[f64]) -> DVector<f64> {
        let tables: Vec<Vec<f64>> = z
            .iter()
            .map(|&zi| hermite_normalized(zi, self.order))
            .collect();
        DVector::from_iterator(
            self.len(),
            self.indices.iter().map(|a| {
                a.iter()
                    .enumerate()
                    .map(|(i, &k)| tables[i][k])
                    .product::<f64>()
            }),
        )
    }

    /// All basis functions at a physical point `x`.
    pub fn evaluate(&self, x: &[f64]) -> DVector<f64> {
        let z = &self.chol_inv * DVector::from_column_slice(x);
        self.evaluate_standard(z.as_slice())
    }

    /// Tensor Gauss–Hermite rule for `μ`: physical nodes and weights summing to one.
    pub fn measure_rule(&self, per_dim: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
        let rule = standard_normal_rule(per_dim)?;
        let n = self.spatial_dim();
        let total = per_dim
            .checked_pow(n as u32)
            .ok_or_else(|| invalid("per_dim", "tensor rule is too large"))?;
        let mut nodes = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        let mut idx = vec![0usize; n];
        for _ in 0..total {
            let z = DVector::from_iterator(n, idx.iter().map(|&i| rule.nodes[i]));
            let x = &self.chol * z;
            nodes.push(x.as_slice().to_vec());
            weights.push(idx.iter().map(|&i| rule.weights[i]).product());
            for slot in idx.iter_mut() {
                *slot += 1;
                if *slot < per_dim {
                    break;
                }
                *slot = 0;
            }
        }
        Ok((nodes, weights))
    }

    /// Coefficients `⟨f, h_α⟩_μ` by tensor Gauss–Hermite quadrature.
    pub fn project(&self, f: impl Fn(&[f64]) -> f64, per_dim: usize) -> Result<DVector<f64>> {
        let (nodes, weights) = self.measure_rule(per_dim)?;
        let mut c = DVector::zeros(self.len());
        for (x, w) in nodes.iter().zip(&weights) {
            c.axpy(w * f(x), &self.evaluate(x), 1.0);
        }
        Ok(c)
    }

    /// Galerkin matrix of `div(Q∇) + Bx·∇` on the span, column `α` holding `A h_α`.
    pub fn generator_matrix(&self, b: &DMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.spatial_dim();
        let d = &self.chol_inv * q * self.chol_inv.transpose();
        let c = &self.chol_inv * b * &self.chol;
        let size = self.len();
        let mut a = DMatrix::zeros(size, size);
        let mut target = vec![0usize; n];
        for (col, alpha) in self.indices.iter().enumerate() {
            // second-order part: D_ij ∂_i ∂_j
            for i in 0..n {
                for j in 0..n {
                    let dij = d[(i, j)];
                    if dij == 0.0 {
                        continue;
                    }
                    target.copy_from_slice(alpha);
                    let coef = if i == j {
                        if alpha[i] < 2 {
                            continue;
                        }
                        target[i] -= 2;
                        ((alpha[i] * (alpha[i] - 1)) as f64).sqrt()
                    } else {
                        if alpha[i] == 0 || alpha[j] == 0 {
                            continue;
                        }
                        target[i] -= 1;
                        target[j] -= 1;
                        ((alpha[i] * alpha[j]) as f64).sqrt()
                    };
                    a[(self.lookup[&target], col)] += dij * coef;
                }
            }
            // first-order part: C_ij z_j ∂_i
            for i in 0..n {
                if alpha[i] == 0 {
                    continue;
                }
                let di = (alpha[i] as f64).sqrt();
                for j in 0..n {
                    let cij = c[(i, j)];
                    if cij == 0.0 {
                        continue;
                    }
                    target.copy_from_slice(alpha);
                    target[i] -= 1;
                    let beta_j = target[j];
                    target[j] += 1;
                    a[(self.lookup[&target], col)] += cij * di * ((beta_j + 1) as f64).sqrt();
                    if beta_j > 0 {
                        target[j] -= 2;
                        a[(self.lookup[&target], col)] += cij * di * (beta_j as f64).sqrt();
                    }
                }
            }
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn dimension_counts() {
        assert_eq!(basis_dimension(1, 7), 8);
        assert_eq!(basis_dimension(2, 10), 66);
        assert_eq!(basis_dimension(3, 4), 35);
        assert_eq!(graded_indices(2, 10).len(), 66);
        assert_eq!(graded_indices(3, 4)[0], vec![0, 0, 0]);
    }

    #[test]
    fn one_dimensional_spectrum_is_integer_multiples() {
        let b = dmatrix![-0.5];
        let q_inf = dmatrix![1.0];
        let basis = HermiteBasis::new(&q_inf, 6, 100).unwrap();
        let a = basis.generator_matrix(&b, &dmatrix![1.0]);
        for k in 0..=6 {
            assert!((a[(k, k)] + 0.5 * k as f64).abs() < 1e-14);
        }
        let mut ev: Vec<f64> = a.complex_eigenvalues().iter().map(|z| z.re).collect();
        ev.sort_by(|x, y| y.total_cmp(x));
        for (k, v) in ev.iter().enumerate() {
            assert!((v + 0.5 * k as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn basis_is_orthonormal_under_measure() {
        let q_inf = dmatrix![1.5, 0.5; 0.5, 0.5];
        let basis = HermiteBasis::new(&q_inf, 4, 100).unwrap();
        let (nodes, weights) = basis.measure_rule(12).unwrap();
        let mut gram = DMatrix::<f64>::zeros(basis.len(), basis.len());
        for (x, w) in nodes.iter().zip(&weights) {
            let v = basis.evaluate(x);
            gram += &v * v.transpose() * *w;
        }
        assert!((gram - DMatrix::<f64>::identity(basis.len(), basis.len())).amax() < 1e-11);
    }

    #[test]
    fn overflow_is_reported() {
        let q_inf = DMatrix::<f64>::identity(4, 4);
        assert!(matches!(
            HermiteBasis::new(&q_inf, 20, 1000),
            Err(Error::BasisOverflow {
                dim: 10626,
                max: 1000
            })
        ));
    }
}
