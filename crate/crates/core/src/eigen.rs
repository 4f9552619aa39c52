//! Symmetric eigendecomposition by the cyclic Jacobi method.

use crate::error::{Error, Result};
use crate::linalg::is_symmetric;
use crate::matrix::Matrix;
use crate::tolerances::Tolerances;

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 30;

/// `s = qᵀ · diag(lambda) · q` with orthogonal `q` whose rows are the
/// eigenvectors, and `lambda` non-increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub q: Matrix,
    pub lambda: Vec<f64>,
}

impl SpectralDecomposition {
    /// `qᵀ · diag(lambda) · q`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.lambda.len();
        let scaled = Matrix::from_fn(n, n, |i, j| self.lambda[i] * self.q[(i, j)]);
        &self.q.transpose() * &scaled
    }

    /// Eigenvector for `lambda[i]`.
    pub fn eigenvector(&self, i: usize) -> &[f64] {
        self.q.row(i)
    }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            sum += a[(i, j)] * a[(i, j)];
        }
    }
    (2.0 * sum).sqrt()
}

/// Annihilates `a[p][q]` with a plane rotation, accumulating it into `v`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = a.rows();
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Diagonalizes a symmetric matrix.
///
/// Iterates cyclic sweeps until the off-diagonal Frobenius mass is at most
/// `eq_rtol · ‖s‖`, then runs one more sweep; quadratic convergence makes
/// that last sweep push the remainder down to rounding level.
pub fn symmetric_eig(s: &Matrix, tol: &Tolerances) -> Result<SpectralDecomposition> {
    let n = s.ensure_square()?;
    if !is_symmetric(s, tol) {
        return Err(Error::NotSymmetric);
    }
    let mut a = (s + &s.transpose()).scale(0.5);
    let mut v = Matrix::identity(n);
    let target = tol.eq_rtol * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    for p in 0..n {
        for q in p + 1..n {
            rotate(&mut a, &mut v, p, q);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let lambda = order.iter().map(|&i| a[(i, i)]).collect();
    let q = Matrix::from_fn(n, n, |r, c| v[(c, order[r])]);
    Ok(SpectralDecomposition { q, lambda })
}
