//! Generalized symmetric eigensolvers for `K u = lambda M u` with `M` positive definite.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparse::{CsrMatrix, EnvelopeCholesky};

/// Ascending eigenvalues with `M`-normalized eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// Subspace iterations used (0 for the dense path).
    pub iterations: usize,
}

impl EigenPairs {
    /// `||K u - lambda M u|| / ||M u||` for every pair.
    pub fn residuals(&self, k: &CsrMatrix, m: &CsrMatrix) -> Vec<f64> {
        self.values.iter().zip(&self.vectors).map(|(&lambda, u)| residual(k, m, lambda, u)).collect()
    }
}

pub(crate) fn residual(k: &CsrMatrix, m: &CsrMatrix, lambda: f64, u: &[f64]) -> f64 {
    let ku = k.mul_vec(u);
    let mu = m.mul_vec(u);
    let num: f64 = ku.iter().zip(&mu).map(|(a, b)| (a - lambda * b).powi(2)).sum();
    let den: f64 = mu.iter().map(|b| b * b).sum();
    (num / den).sqrt()
}

/// Full dense solve: Cholesky `M = L L^T`, symmetric eigendecomposition of
/// `L^-1 K L^-T`, back-substitution. Returns all pairs, ascending.
fn dense_all(k: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = k.nrows();
    let chol = m.clone().cholesky().ok_or(Error::NotPositiveDefinite { row: 0, pivot: f64::NAN })?;
    let l = chol.l();
    let lk = l.solve_lower_triangular(k).expect("cholesky factor is invertible");
    let mut c = l.solve_lower_triangular(&lk.transpose()).expect("cholesky factor is invertible");
    c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut y = DMatrix::zeros(n, n);
    for (col, &i) in idx.iter().enumerate() {
        y.set_column(col, &eig.eigenvectors.column(i));
    }
    let u = l.transpose().solve_upper_triangular(&y).expect("cholesky factor is invertible");
    Ok((values, u))
}

/// Dense generalized solver; returns the `count` smallest pairs.
pub fn dense_generalized(k: &CsrMatrix, m: &CsrMatrix, count: usize) -> Result<EigenPairs> {
    let n = k.dim();
    if count > n {
        return Err(Error::NotEnoughDofs { requested: count, available: n });
    }
    let (values, u) = dense_all(&k.to_dense(), &m.to_dense())?;
    Ok(EigenPairs {
        values: values[..count].to_vec(),
        vectors: (0..count).map(|j| u.column(j).iter().copied().collect()).collect(),
        iterations: 0,
    })
}

/// Shift-invert subspace iteration with Rayleigh-Ritz.
///
/// Factors `K + shift M` once (envelope Cholesky), then iterates
/// `Y = (K + shift M)^-1 M X` on a block somewhat larger than `count`
/// until every requested Ritz pair has
/// `||K u - theta M u|| / ||M u|| <= tolerance * max(|theta|, |theta_count|)`.
/// `shift` must make `K + shift M` positive definite.
pub fn shift_invert(
    k: &CsrMatrix,
    m: &CsrMatrix,
    count: usize,
    shift: f64,
    tolerance: f64,
    max_iterations: usize,
) -> Result<EigenPairs> {
    let n = k.dim();
    if count > n {
        return Err(Error::NotEnoughDofs { requested: count, available: n });
    }
    let block = (2 * count).max(count + 8).min(n);
    if block == n {
        return dense_generalized(k, m, count);
    }
    let factor = EnvelopeCholesky::factor(&k.add_scaled(m, shift))?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x: Vec<Vec<f64>> = (0..block).map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();

    let mut worst = f64::INFINITY;
    for iteration in 1..=max_iterations {
        let mut y: Vec<Vec<f64>> = x.iter().map(|col| factor.solve(&m.mul_vec(col))).collect();
        for col in &mut y {
            let norm = m.quad_form(col).sqrt();
            col.iter_mut().for_each(|v| *v /= norm);
        }
        let ky: Vec<Vec<f64>> = y.iter().map(|c| k.mul_vec(c)).collect();
        let my: Vec<Vec<f64>> = y.iter().map(|c| m.mul_vec(c)).collect();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
        let kr = DMatrix::from_fn(block, block, |i, j| 0.5 * (dot(&y[i], &ky[j]) + dot(&y[j], &ky[i])));
        let mr = DMatrix::from_fn(block, block, |i, j| 0.5 * (dot(&y[i], &my[j]) + dot(&y[j], &my[i])));
        let (theta, q) = dense_all(&kr, &mr)?;

        x = (0..block)
            .map(|j| {
                let mut col = vec![0.0; n];
                for (i, yi) in y.iter().enumerate() {
                    let c = q[(i, j)];
                    col.iter_mut().zip(yi).for_each(|(v, w)| *v += c * w);
                }
                col
            })
            .collect();

        let scale = theta[count - 1].abs();
        worst = 0.0;
        let mut converged = true;
        for j in 0..count {
            let r = residual(k, m, theta[j], &x[j]);
            worst = f64::max(worst, r / theta[j].abs().max(scale));
            if r > tolerance * theta[j].abs().max(scale) {
                converged = false;
            }
        }
        if converged {
            return Ok(EigenPairs { values: theta[..count].to_vec(), vectors: x[..count].to_vec(), iterations: iteration });
        }
    }
    Err(Error::NoConvergence { iterations: max_iterations, residual: worst })
}
