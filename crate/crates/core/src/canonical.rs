//! Real orthogonal block-diagonalization of orthogonal matrices.
//!
//! For orthogonal `q` the symmetric part `(q + qᵀ)/2` has eigenvalues
//! `cos θ`, and each of its eigenspaces is invariant under `q`. Inside one
//! eigenspace the antisymmetric part of the restriction separates fixed
//! directions (`sin θ = 0`) from rotation planes, and resolves small angles
//! that `cos θ` alone cannot tell apart from 0 or π.

use std::f64::consts::PI;

use crate::eigen::symmetric_eig;
use crate::error::{Error, Result};
use crate::linalg::{direct_sum, is_orthogonal};
use crate::matrix::Matrix;
use crate::tolerances::Tolerances;

/// One order-≤2 orthogonal block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CanonicalBlock {
    PlusOne,
    MinusOne,
    /// `[[cos θ, sin θ], [−sin θ, cos θ]]` with θ in (0, π).
    Rotation(f64),
    /// `[[cos θ, sin θ], [sin θ, −cos θ]]`. Never produced by
    /// [`orthogonal_canonical_form`]; reflection planes come out as
    /// `PlusOne ⊕ MinusOne`.
    Reflection(f64),
}

impl CanonicalBlock {
    pub fn size(&self) -> usize {
        match self {
            CanonicalBlock::PlusOne | CanonicalBlock::MinusOne => 1,
            CanonicalBlock::Rotation(_) | CanonicalBlock::Reflection(_) => 2,
        }
    }

    pub fn matrix(&self) -> Matrix {
        match *self {
            CanonicalBlock::PlusOne => Matrix::identity(1),
            CanonicalBlock::MinusOne => Matrix::identity(1).scale(-1.0),
            CanonicalBlock::Rotation(t) => crate::families::rotation(t),
            CanonicalBlock::Reflection(t) => crate::families::reflection(t),
        }
    }
}

/// `input = p · (block₁ ⊕ block₂ ⊕ …) · pᵀ` with orthogonal `p`.
///
/// Blocks are ordered: every `PlusOne`, every `MinusOne`, then rotations by
/// ascending angle.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalOrthogonalForm {
    pub p: Matrix,
    pub blocks: Vec<CanonicalBlock>,
}

impl CanonicalOrthogonalForm {
    pub fn block_diagonal(&self) -> Matrix {
        let mats: Vec<Matrix> = self.blocks.iter().map(CanonicalBlock::matrix).collect();
        direct_sum(&mats).expect("canonical form has at least one block")
    }

    pub fn reconstruct(&self) -> Matrix {
        &(&self.p * &self.block_diagonal()) * &self.p.transpose()
    }

    pub fn plus_count(&self) -> usize {
        self.count(|b| matches!(b, CanonicalBlock::PlusOne))
    }

    pub fn minus_count(&self) -> usize {
        self.count(|b| matches!(b, CanonicalBlock::MinusOne))
    }

    /// Rotation angles in block order.
    pub fn rotation_angles(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                CanonicalBlock::Rotation(t) => Some(*t),
                _ => None,
            })
            .collect()
    }

    fn count(&self, f: impl Fn(&CanonicalBlock) -> bool) -> usize {
        self.blocks.iter().filter(|b| f(b)).count()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn apply(q: &Matrix, v: &[f64]) -> Vec<f64> {
    (0..q.rows()).map(|i| dot(q.row(i), v)).collect()
}

/// Projects `vectors` onto the orthogonal complement of the unit vector
/// `against` and re-orthonormalizes them, keeping the `keep` directions of
/// largest residual (modified Gram-Schmidt with pivoting).
fn deflate(vectors: &[Vec<f64>], against: &[f64], keep: usize) -> Vec<Vec<f64>> {
    let mut work: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| {
            let c = dot(v, against);
            v.iter().zip(against).map(|(x, a)| x - c * a).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(keep);
    while out.len() < keep && !work.is_empty() {
        let (best, _) = work
            .iter()
            .enumerate()
            .map(|(i, v)| (i, norm(v)))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let mut v = work.swap_remove(best);
        let nv = norm(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        for w in work.iter_mut() {
            let c = dot(w, &v);
            w.iter_mut().zip(&v).for_each(|(x, y)| *x -= c * y);
        }
        out.push(v);
    }
    out
}

/// Splits a sorted (descending) sequence into runs whose consecutive gaps are
/// at most `gap`. Returns index ranges.
fn clusters(values: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i - 1] - values[i] > gap {
            out.push(start..i);
            start = i;
        }
    }
    out
}

struct Plane {
    v: Vec<f64>,
    u: Vec<f64>,
    theta: f64,
}

/// Greedy plane extraction inside an invariant subspace where `q` acts as
/// rotations by (nearly) one angle.
fn extract_planes(q: &Matrix, basis: Vec<Vec<f64>>, cos_hint: f64) -> Result<Vec<Plane>> {
    if !basis.len().is_multiple_of(2) {
        return Err(Error::ClusterAmbiguous {
            eigenvalue: cos_hint,
        });
    }
    let mut remaining = basis;
    let mut planes = Vec::new();
    while !remaining.is_empty() {
        let v = remaining[0].clone();
        let qv = apply(q, &v);
        let mut u = vec![0.0; v.len()];
        for r in &remaining[1..] {
            let c = dot(r, &qv);
            u.iter_mut().zip(r).for_each(|(x, y)| *x += c * y);
        }
        let nu = norm(&u);
        if nu == 0.0 {
            return Err(Error::ClusterAmbiguous {
                eigenvalue: cos_hint,
            });
        }
        u.iter_mut().for_each(|x| *x /= nu);
        let qu = apply(q, &u);
        let (b00, b01, b10, b11) = (dot(&v, &qv), dot(&v, &qu), dot(&u, &qv), dot(&u, &qu));
        let mut theta = (0.5 * (b01 - b10)).atan2(0.5 * (b00 + b11));
        if theta < 0.0 {
            u.iter_mut().for_each(|x| *x = -*x);
            theta = -theta;
        }
        let keep = remaining.len() - 2;
        remaining = deflate(&remaining[1..], &u, keep);
        planes.push(Plane { v, u, theta });
    }
    Ok(planes)
}

/// Sine level at or below which a direction is treated as fixed (±1).
fn fixed_threshold(tol: &Tolerances) -> f64 {
    10.0 * tol.eq_rtol
}

/// Reduces an orthogonal matrix to `PlusOne`/`MinusOne`/`Rotation` blocks.
pub fn orthogonal_canonical_form(q: &Matrix, tol: &Tolerances) -> Result<CanonicalOrthogonalForm> {
    let n = q.ensure_square()?;
    if !is_orthogonal(q, tol) {
        return Err(Error::NotOrthogonal);
    }
    let sym = (q + &q.transpose()).scale(0.5);
    let spectral = symmetric_eig(&sym, tol)?;

    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut planes = Vec::new();

    for range in clusters(&spectral.lambda, tol.pair_tol) {
        let cos_hint = spectral.lambda[range.clone()].iter().sum::<f64>() / range.len() as f64;
        let w: Vec<Vec<f64>> = range
            .clone()
            .map(|i| spectral.eigenvector(i).to_vec())
            .collect();
        let wm = Matrix::from_columns(&w)?;
        let d = w.len();

        // Antisymmetric part of the restriction of q to this eigenspace.
        let restricted = &(&wm.transpose() * q) * &wm;
        let skew = (&restricted - &restricted.transpose()).scale(0.5);
        let gram = &skew.transpose() * &skew;
        let sines = symmetric_eig(&gram, tol)?;
        let sigma: Vec<f64> = sines.lambda.iter().map(|s| s.max(0.0).sqrt()).collect();

        for sub in clusters(&sigma, tol.pair_tol) {
            let vectors: Vec<Vec<f64>> = sub
                .clone()
                .map(|i| {
                    let y = sines.eigenvector(i);
                    (0..n)
                        .map(|r| (0..d).map(|c| wm[(r, c)] * y[c]).sum())
                        .collect()
                })
                .collect();
            if sigma[sub.start] <= fixed_threshold(tol) {
                for v in vectors {
                    let c = dot(&v, &apply(q, &v));
                    if c >= 0.5 {
                        plus.push(v);
                    } else if c <= -0.5 {
                        minus.push(v);
                    } else {
                        return Err(Error::ClusterAmbiguous {
                            eigenvalue: cos_hint,
                        });
                    }
                }
            } else {
                planes.extend(extract_planes(q, vectors, cos_hint)?);
            }
        }
    }

    planes.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(n);
    for v in plus {
        columns.push(v);
        blocks.push(CanonicalBlock::PlusOne);
    }
    for v in minus {
        columns.push(v);
        blocks.push(CanonicalBlock::MinusOne);
    }
    for plane in planes {
        debug_assert!(plane.theta > 0.0 && plane.theta < PI);
        columns.push(plane.v);
        columns.push(plane.u);
        blocks.push(CanonicalBlock::Rotation(plane.theta));
    }
    debug_assert_eq!(columns.len(), n);
    Ok(CanonicalOrthogonalForm {
        p: Matrix::from_columns(&columns)?,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{reflection, rotation};
    use CanonicalBlock::*;

    #[test]
    fn identity_is_all_plus_one() {
        let tol = Tolerances::default();
        let f = orthogonal_canonical_form(&Matrix::identity(3), &tol).unwrap();
        assert_eq!(f.p, Matrix::identity(3));
        assert_eq!(f.blocks, vec![PlusOne, PlusOne, PlusOne]);
    }

    #[test]
    fn rotation_block_is_already_canonical() {
        let tol = Tolerances::default();
        let q = rotation(PI / 3.0);
        let f = orthogonal_canonical_form(&q, &tol).unwrap();
        assert_eq!(f.blocks.len(), 1);
        match f.blocks[0] {
            Rotation(t) => assert!((t - PI / 3.0).abs() < 1e-14),
            ref other => panic!("unexpected block {other:?}"),
        }
        assert!(f.reconstruct().approx_eq(&q, 1e-14));
    }

    #[test]
    fn negative_angle_is_reoriented() {
        let tol = Tolerances::default();
        let q = rotation(-0.4);
        let f = orthogonal_canonical_form(&q, &tol).unwrap();
        assert_eq!(f.rotation_angles().len(), 1);
        assert!((f.rotation_angles()[0] - 0.4).abs() < 1e-14);
        assert!(f.reconstruct().approx_eq(&q, 1e-14));
    }

    #[test]
    fn reflection_splits_into_plus_and_minus() {
        let tol = Tolerances::default();
        let q = reflection(PI / 4.0);
        let f = orthogonal_canonical_form(&q, &tol).unwrap();
        assert_eq!(f.blocks, vec![PlusOne, MinusOne]);
        assert!(f.reconstruct().approx_eq(&q, 1e-14));
    }

    #[test]
    fn tiny_angle_is_not_mistaken_for_identity() {
        let tol = Tolerances::default();
        let q = direct_sum(&[Matrix::identity(1), rotation(1e-5), rotation(PI - 1e-5)]).unwrap();
        let f = orthogonal_canonical_form(&q, &tol).unwrap();
        assert_eq!(f.plus_count(), 1);
        assert_eq!(f.rotation_angles().len(), 2);
        assert!(f.reconstruct().approx_eq(&q, 1e-12));
    }

    #[test]
    fn repeated_angles_pair_up() {
        let tol = Tolerances::default();
        let q = direct_sum(&[
            rotation(1.0),
            rotation(-1.0),
            rotation(1.0),
            Matrix::identity(1),
        ])
        .unwrap();
        let f = orthogonal_canonical_form(&q, &tol).unwrap();
        assert_eq!(f.rotation_angles().len(), 3);
        assert!(f.reconstruct().approx_eq(&q, 1e-13));
        assert!(is_orthogonal(&f.p, &tol));
    }

    #[test]
    fn rejects_non_orthogonal() {
        let tol = Tolerances::default();
        assert_eq!(
            orthogonal_canonical_form(&Matrix::diag(&[1.0, 2.0]).unwrap(), &tol),
            Err(Error::NotOrthogonal)
        );
    }
}
