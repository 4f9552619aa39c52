//! Dense kernels: direct sums, LU with partial pivoting, column bases by
//! Gauss-Jordan elimination, and the algebraic predicates.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::tolerances::Tolerances;

pub fn identity(n: usize) -> Matrix {
    Matrix::identity(n)
}

pub fn transpose(a: &Matrix) -> Matrix {
    a.transpose()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.matmul(b)
}

/// Block-diagonal assembly `blocks[0] ⊕ blocks[1] ⊕ …`.
pub fn direct_sum(blocks: &[Matrix]) -> Result<Matrix> {
    if blocks.is_empty() {
        return Err(Error::EmptyBlockList);
    }
    let mut n = 0;
    for b in blocks {
        n += b.ensure_square()?;
    }
    let mut out = Matrix::zeros(n, n);
    let mut offset = 0;
    for b in blocks {
        out.set_block(offset, offset, b);
        offset += b.rows();
    }
    Ok(out)
}

/// LU factorization `P·A = L·U` with partial pivoting, unit lower `L`
/// packed below the diagonal.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
    singular_at: Option<usize>,
}

impl Lu {
    /// Factors `a`. A pivot smaller than `rank_tol` times the largest pivot
    /// seen so far marks the factorization singular; elimination still runs
    /// to completion so the determinant remains available.
    pub fn factor(a: &Matrix, tol: &Tolerances) -> Result<Lu> {
        let n = a.ensure_square()?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular_at = None;
        let mut max_pivot: f64 = 0.0;
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if lu[(i, k)].abs() > lu[(p, k)].abs() {
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            max_pivot = max_pivot.max(pivot.abs());
            if pivot == 0.0 || pivot.abs() < tol.rank_tol * max_pivot {
                singular_at.get_or_insert(k);
                if pivot == 0.0 {
                    continue;
                }
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= f * lu[(k, j)];
                    }
                }
            }
        }
        Ok(Lu {
            lu,
            perm,
            sign,
            singular_at,
        })
    }

    pub fn is_singular(&self) -> bool {
        self.singular_at.is_some()
    }

    pub fn det(&self) -> f64 {
        if self.singular_at.is_some() {
            return 0.0;
        }
        let n = self.lu.rows();
        (0..n).fold(self.sign, |d, i| d * self.lu[(i, i)])
    }

    /// Solves `A·x = b` in place.
    fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.lu.rows();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        b.copy_from_slice(&x);
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if let Some(index) = self.singular_at {
            return Err(Error::Singular { index });
        }
        let n = self.lu.rows();
        let mut inv = Matrix::zeros(n, n);
        let mut col = vec![0.0; n];
        for j in 0..n {
            col.iter_mut().for_each(|x| *x = 0.0);
            col[j] = 1.0;
            self.solve_in_place(&mut col);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }
}

pub fn lu_invert(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    Lu::factor(a, tol)?.inverse()
}

/// Determinant via LU; a singular matrix (by `rank_tol`) reports 0.
pub fn det(a: &Matrix, tol: &Tolerances) -> Result<f64> {
    Ok(Lu::factor(a, tol)?.det())
}

/// Basis of the column space of `x`, one vector per rank.
///
/// The vectors are the columns of the reduced column-echelon form of `x`,
/// so each has a unit entry at its own pivot row and zeros at the pivot rows
/// of the others. Pivots below `rank_tol · max|x|` are treated as zero.
pub fn column_basis(x: &Matrix, rank_tol: f64) -> Vec<Vec<f64>> {
    // Gauss-Jordan on xᵀ: its rows are the columns of x.
    let mut w: Vec<Vec<f64>> = (0..x.cols()).map(|j| x.column(j)).collect();
    let threshold = rank_tol * x.max_abs();
    let width = x.rows();
    let mut rank = 0;
    for col in 0..width {
        if rank == w.len() {
            break;
        }
        let mut p = rank;
        for r in rank + 1..w.len() {
            if w[r][col].abs() > w[p][col].abs() {
                p = r;
            }
        }
        if w[p][col].abs() <= threshold {
            continue;
        }
        w.swap(rank, p);
        let pivot = w[rank][col];
        w[rank].iter_mut().for_each(|v| *v /= pivot);
        w[rank][col] = 1.0;
        let pivot_row = w[rank].clone();
        for (r, row) in w.iter_mut().enumerate() {
            if r == rank {
                continue;
            }
            let f = row[col];
            if f != 0.0 {
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[col] = 0.0;
            }
        }
        rank += 1;
    }
    w.truncate(rank);
    w
}

/// Basis of `rank` vectors for the column space of the projector `p`, in
/// reduced column-echelon form.
///
/// The rank of a projector equals its trace, so callers pass it in rather
/// than have it guessed from pivot sizes. An orthonormal basis is found
/// first by Gram-Schmidt with column pivoting; Gauss-Jordan then runs on
/// that well-scaled basis, taking at each step the first row whose entry is
/// within a factor 10 of the largest remaining one.
pub fn projector_basis(p: &Matrix, rank: usize) -> Vec<Vec<f64>> {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut cols: Vec<Vec<f64>> = (0..p.cols()).map(|j| p.column(j)).collect();
    let mut w: Vec<Vec<f64>> = Vec::with_capacity(rank);
    while w.len() < rank && !cols.is_empty() {
        let best = (0..cols.len())
            .max_by(|&i, &j| {
                dot(&cols[i], &cols[i])
                    .total_cmp(&dot(&cols[j], &cols[j]))
                    .then(j.cmp(&i))
            })
            .expect("non-empty");
        let mut v = cols.swap_remove(best);
        // Two passes keep the result orthogonal to working precision.
        for _ in 0..2 {
            for u in &w {
                let d = dot(u, &v);
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= d * y);
            }
        }
        let len = dot(&v, &v).sqrt();
        if len == 0.0 {
            break;
        }
        v.iter_mut().for_each(|x| *x /= len);
        for c in cols.iter_mut() {
            let d = dot(&v, c);
            c.iter_mut().zip(&v).for_each(|(x, y)| *x -= d * y);
        }
        w.push(v);
    }

    let width = p.rows();
    let mut pivots = Vec::with_capacity(w.len());
    let mut done = 0;
    while done < w.len() {
        let largest = |col: usize| w[done..].iter().map(|r| r[col].abs()).fold(0.0, f64::max);
        let peak = (0..width).map(largest).fold(0.0, f64::max);
        if peak == 0.0 {
            break;
        }
        let col = (0..width)
            .find(|&c| largest(c) >= 0.1 * peak)
            .expect("peak attained");
        let p = (done..w.len())
            .max_by(|&i, &j| w[i][col].abs().total_cmp(&w[j][col].abs()).then(j.cmp(&i)))
            .expect("non-empty");
        w.swap(done, p);
        pivots.push(col);
        let pivot = w[done][col];
        w[done].iter_mut().for_each(|v| *v /= pivot);
        w[done][col] = 1.0;
        let pivot_row = w[done].clone();
        for (r, row) in w.iter_mut().enumerate() {
            if r != done {
                let f = row[col];
                row.iter_mut()
                    .zip(&pivot_row)
                    .for_each(|(v, &pv)| *v -= f * pv);
                row[col] = 0.0;
            }
        }
        done += 1;
    }
    w.truncate(done);
    // Vectors come out in pivot-choice order; sort them by pivot position.
    let mut keyed: Vec<(usize, Vec<f64>)> = pivots.into_iter().zip(w).collect();
    keyed.sort_by_key(|(col, _)| *col);
    keyed.into_iter().map(|(_, v)| v).collect()
}

/// Rank of a projector read off its trace, clamped to `0..=n`.
pub(crate) fn projector_rank(p: &Matrix) -> usize {
    let n = p.rows() as f64;
    p.trace().round().clamp(0.0, n) as usize
}

pub fn involutory_residual(a: &Matrix) -> Result<f64> {
    let n = a.ensure_square()?;
    Ok((&(a * a) - &Matrix::identity(n)).frobenius_norm())
}

pub fn idempotent_residual(a: &Matrix) -> Result<f64> {
    a.ensure_square()?;
    Ok((&(a * a) - a).frobenius_norm())
}

pub fn orthogonal_residual(a: &Matrix) -> Result<f64> {
    let n = a.ensure_square()?;
    Ok((&(&a.transpose() * a) - &Matrix::identity(n)).frobenius_norm())
}

fn squared_scale(a: &Matrix) -> f64 {
    1.0 + a.frobenius_norm().powi(2)
}

/// `‖a² − I‖ ≤ eq_rtol·(1 + ‖a‖²)`; non-square input is never involutory.
pub fn is_involutory(a: &Matrix, tol: &Tolerances) -> bool {
    involutory_residual(a).is_ok_and(|r| r <= tol.eq_rtol * squared_scale(a))
}

/// `‖a² − a‖ ≤ eq_rtol·(1 + ‖a‖²)`.
pub fn is_idempotent(a: &Matrix, tol: &Tolerances) -> bool {
    idempotent_residual(a).is_ok_and(|r| r <= tol.eq_rtol * squared_scale(a))
}

/// `‖aᵀa − I‖ ≤ eq_rtol·(1 + ‖a‖²)`.
pub fn is_orthogonal(a: &Matrix, tol: &Tolerances) -> bool {
    orthogonal_residual(a).is_ok_and(|r| r <= tol.eq_rtol * squared_scale(a))
}

/// `‖a − aᵀ‖ ≤ eq_rtol·‖a‖`.
pub fn is_symmetric(a: &Matrix, tol: &Tolerances) -> bool {
    a.is_square() && (a - &a.transpose()).frobenius_norm() <= tol.eq_rtol * a.frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn direct_sum_examples() {
        assert_eq!(
            direct_sum(&[Matrix::identity(1)]).unwrap(),
            Matrix::identity(1)
        );
        assert_eq!(
            direct_sum(&[m(&[&[1.0]]), m(&[&[-1.0]])]).unwrap(),
            Matrix::diag(&[1.0, -1.0]).unwrap()
        );
        let j = m(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert_eq!(
            direct_sum(&[j, m(&[&[2.0]])]).unwrap(),
            m(&[&[0.0, -1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 2.0]])
        );
    }

    #[test]
    fn direct_sum_errors() {
        assert_eq!(direct_sum(&[]), Err(Error::EmptyBlockList));
        assert!(matches!(
            direct_sum(&[Matrix::zeros(1, 2)]),
            Err(Error::NotSquare { rows: 1, cols: 2 })
        ));
    }

    #[test]
    fn lu_invert_examples() {
        let tol = Tolerances::default();
        assert_eq!(
            lu_invert(&Matrix::identity(3), &tol).unwrap(),
            Matrix::identity(3)
        );
        assert_eq!(
            lu_invert(&Matrix::diag(&[2.0, 4.0]).unwrap(), &tol).unwrap(),
            Matrix::diag(&[0.5, 0.25]).unwrap()
        );
        let inv = lu_invert(&m(&[&[1.0, 1.0], &[1.0, 2.0]]), &tol).unwrap();
        assert!(inv.approx_eq(&m(&[&[2.0, -1.0], &[-1.0, 1.0]]), 1e-15));
    }

    #[test]
    fn lu_invert_singular() {
        let tol = Tolerances::default();
        assert_eq!(
            lu_invert(&m(&[&[1.0, 2.0], &[2.0, 4.0]]), &tol),
            Err(Error::Singular { index: 1 })
        );
        assert_eq!(
            lu_invert(&Matrix::zeros(2, 2), &tol),
            Err(Error::Singular { index: 0 })
        );
        assert!(lu_invert(&Matrix::diag(&[1.0, 1e-12]).unwrap(), &tol).is_err());
        assert!(matches!(
            lu_invert(&Matrix::zeros(2, 3), &tol),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn det_examples() {
        let tol = Tolerances::default();
        assert_eq!(det(&Matrix::identity(4), &tol).unwrap(), 1.0);
        assert_eq!(
            det(&Matrix::diag(&[1.0, -1.0]).unwrap(), &tol).unwrap(),
            -1.0
        );
        let d = det(&m(&[&[3.0, 2.0], &[-4.0, -3.0]]), &tol).unwrap();
        assert!((d + 1.0).abs() < 1e-15);
        assert_eq!(det(&m(&[&[1.0, 2.0], &[2.0, 4.0]]), &tol).unwrap(), 0.0);
    }

    #[test]
    fn column_basis_echelon_vectors() {
        let p = m(&[&[2.0, -1.0], &[2.0, -1.0]]);
        assert_eq!(column_basis(&p, 1e-10), vec![vec![1.0, 1.0]]);
        let q = &Matrix::identity(2) - &p;
        assert_eq!(column_basis(&q, 1e-10), vec![vec![1.0, 2.0]]);
        assert!(column_basis(&Matrix::zeros(3, 3), 1e-10).is_empty());
        assert_eq!(column_basis(&Matrix::identity(3), 1e-10).len(), 3);
    }

    #[test]
    fn predicates() {
        let tol = Tolerances::default();
        assert!(is_involutory(&Matrix::identity(3), &tol));
        assert!(is_idempotent(&m(&[&[2.0, -1.0], &[2.0, -1.0]]), &tol));
        assert!(!is_orthogonal(&Matrix::diag(&[1.0, 2.0]).unwrap(), &tol));
        assert!(is_orthogonal(&m(&[&[0.0, 1.0], &[-1.0, 0.0]]), &tol));
        assert!(!is_involutory(&Matrix::zeros(2, 3), &tol));
        assert!(is_symmetric(&m(&[&[0.0, 1.0], &[1.0, 0.0]]), &tol));
        assert!(!is_symmetric(&m(&[&[0.0, 1.0], &[2.0, 0.0]]), &tol));
    }

    #[test]
    fn projector_basis_is_echelon() {
        let p = m(&[&[2.0, -1.0], &[2.0, -1.0]]);
        assert_eq!(projector_rank(&p), 1);
        assert_eq!(projector_basis(&p, 1), vec![vec![1.0, 1.0]]);
        let q = &Matrix::identity(2) - &p;
        assert_eq!(projector_basis(&q, 1), vec![vec![1.0, 2.0]]);
        assert!(projector_basis(&Matrix::zeros(3, 3), 0).is_empty());
        assert_eq!(
            projector_basis(&Matrix::identity(3), 3),
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0]
            ]
        );
    }

    #[test]
    fn projector_rank_ignores_rounding() {
        let noise = Matrix::from_fn(4, 4, |i, j| 1e-15 * (i as f64 - j as f64 + 0.5));
        assert_eq!(projector_rank(&noise), 0);
        assert!(projector_basis(&noise, projector_rank(&noise)).is_empty());
    }
}
