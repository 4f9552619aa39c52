//! Real square roots of involutory, symmetric and orthogonal matrices.
//!
//! Each constructor reduces its input to a canonical form
//! (`diag(±1)`, `diag(λ)`, or rotation blocks), takes a blockwise root there,
//! and conjugates back. A negative eigenvalue needs a partner of equal value:
//! the pair `μ·I₂` has the real root `√(−μ)·Ψ(a, b)`, while a lone `−1` has
//! no real root at order 1 and `diag(1, −1)` has none at order 2.

use std::f64::consts::PI;

use crate::canonical::{orthogonal_canonical_form, CanonicalBlock, CanonicalOrthogonalForm};
use crate::eigen::symmetric_eig;
use crate::error::{Error, Result};
use crate::families::{psi, rotation, Sign};
use crate::linalg::{
    direct_sum, is_involutory, is_symmetric, lu_invert, projector_basis, projector_rank, Lu,
};
use crate::matrix::Matrix;
use crate::tolerances::Tolerances;

/// Deepest supported root tower; beyond this the halved angles underflow
/// any meaningful resolution.
pub const MAX_TOWER_DEPTH: u32 = 40;

/// Free choices in the root constructions.
///
/// `signs` picks `±√λ` (or `±1`) for each non-negative eigenvalue in order;
/// `psi_params` picks `Ψ(a, b)` for each negative pair. Defaults are all `+1`
/// and `Ψ(0, 1)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootOptions {
    pub signs: Option<Vec<Sign>>,
    pub psi_params: Option<Vec<(f64, f64)>>,
}

impl RootOptions {
    fn signs(&self, count: usize) -> Result<Vec<f64>> {
        match &self.signs {
            None => Ok(vec![1.0; count]),
            Some(s) if s.len() == count => Ok(s.iter().map(|s| s.value()).collect()),
            Some(s) => Err(Error::InvalidParameter(format!(
                "expected {count} sign choices, got {}",
                s.len()
            ))),
        }
    }

    fn psi_blocks(&self, count: usize) -> Result<Vec<Matrix>> {
        match &self.psi_params {
            None => (0..count).map(|_| psi(0.0, 1.0)).collect(),
            Some(p) if p.len() == count => p.iter().map(|&(a, b)| psi(a, b)).collect(),
            Some(p) => Err(Error::InvalidParameter(format!(
                "expected {count} psi parameter pairs, got {}",
                p.len()
            ))),
        }
    }
}

/// `b⁻¹ · a · b = diag(1,…,1, −1,…,−1)` with `plus_count` ones.
#[derive(Clone, Debug, PartialEq)]
pub struct InvolutoryEigenbasis {
    pub b: Matrix,
    pub plus_count: usize,
}

impl InvolutoryEigenbasis {
    pub fn signature(&self) -> Matrix {
        let n = self.b.rows();
        let d: Vec<f64> = (0..n)
            .map(|i| if i < self.plus_count { 1.0 } else { -1.0 })
            .collect();
        Matrix::diag(&d).expect("non-empty signature")
    }

    pub fn minus_count(&self) -> usize {
        self.b.rows() - self.plus_count
    }

    /// `b · signature · b⁻¹`.
    pub fn reconstruct(&self, tol: &Tolerances) -> Result<Matrix> {
        conjugate(&self.b, &self.signature(), tol)
    }
}

fn conjugate(b: &Matrix, d: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    Ok(&(b * d) * &lu_invert(b, tol)?)
}

/// Real eigenbasis of an involutory matrix from the ranges of its spectral
/// projectors `(I + a)/2` and `(I − a)/2`.
pub fn involutory_eigenbasis(a: &Matrix, tol: &Tolerances) -> Result<InvolutoryEigenbasis> {
    let n = a.ensure_square()?;
    if !is_involutory(a, tol) {
        return Err(Error::NotInvolutory);
    }
    let id = Matrix::identity(n);
    let plus_proj = (&id + a).scale(0.5);
    let minus_proj = (&id - a).scale(0.5);
    let plus_count = projector_rank(&plus_proj);
    let plus = projector_basis(&plus_proj, plus_count);
    let minus = projector_basis(&minus_proj, n - plus_count);
    if plus.len() + minus.len() != n {
        return Err(Error::NotInvolutory);
    }
    let mut columns = plus;
    columns.extend(minus);
    let b = Matrix::from_columns(&columns)?;
    if Lu::factor(&b, tol)?.is_singular() {
        return Err(Error::NotInvolutory);
    }
    Ok(InvolutoryEigenbasis { b, plus_count })
}

/// Real root of an involutory matrix whose `−1` eigenvalue has even
/// multiplicity (equivalently `det a = 1`).
pub fn involutory_real_root(a: &Matrix, opts: &RootOptions, tol: &Tolerances) -> Result<Matrix> {
    let basis = involutory_eigenbasis(a, tol)?;
    let minus = basis.minus_count();
    if !minus.is_multiple_of(2) {
        return Err(Error::OddNegativeMultiplicity {
            eigenvalue: -1.0,
            count: minus,
        });
    }
    let mut blocks: Vec<Matrix> = opts
        .signs(basis.plus_count)?
        .into_iter()
        .map(|s| Matrix::identity(1).scale(s))
        .collect();
    blocks.extend(opts.psi_blocks(minus / 2)?);
    let d = direct_sum(&blocks)?;
    conjugate(&basis.b, &d, tol)
}

/// Real root `qᵀ·D·q` of a symmetric matrix whose negative eigenvalues all
/// have even multiplicity.
///
/// Eigenvalues closer than `pair_tol·‖s‖` are one cluster; those at or above
/// `−pair_tol·‖s‖` count as non-negative. A cluster straddling that threshold
/// is rejected as ambiguous.
pub fn symmetric_real_root(s: &Matrix, opts: &RootOptions, tol: &Tolerances) -> Result<Matrix> {
    s.ensure_square()?;
    if !is_symmetric(s, tol) {
        return Err(Error::NotSymmetric);
    }
    let spectral = symmetric_eig(s, tol)?;
    let lambda = &spectral.lambda;
    let tau = tol.pair_tol * s.frobenius_norm();

    let mut nonneg = Vec::new();
    let mut pairs = Vec::new();
    let mut start = 0;
    for i in 1..=lambda.len() {
        if i < lambda.len() && lambda[i - 1] - lambda[i] <= tau {
            continue;
        }
        let cluster = &lambda[start..i];
        let negatives = cluster.iter().filter(|&&l| l < -tau).count();
        if negatives == 0 {
            nonneg.extend(cluster.iter().map(|l| l.max(0.0)));
        } else if negatives < cluster.len() {
            let nearest = cluster
                .iter()
                .copied()
                .min_by(|x, y| (x + tau).abs().total_cmp(&(y + tau).abs()))
                .unwrap_or(cluster[0]);
            return Err(Error::ClusterAmbiguous {
                eigenvalue: nearest,
            });
        } else if !cluster.len().is_multiple_of(2) {
            return Err(Error::OddNegativeMultiplicity {
                eigenvalue: cluster.iter().sum::<f64>() / cluster.len() as f64,
                count: cluster.len(),
            });
        } else {
            pairs.extend(cluster.chunks(2).map(|p| 0.5 * (p[0] + p[1])));
        }
        start = i;
    }

    let mut blocks: Vec<Matrix> = opts
        .signs(nonneg.len())?
        .into_iter()
        .zip(&nonneg)
        .map(|(sign, l)| Matrix::identity(1).scale(sign * l.sqrt()))
        .collect();
    for (mu, block) in pairs.iter().zip(opts.psi_blocks(pairs.len())?) {
        blocks.push(block.scale((-mu).sqrt()));
    }
    let d = direct_sum(&blocks)?;
    let q = &spectral.q;
    Ok(&(&q.transpose() * &d) * q)
}

fn require_even_minus(form: &CanonicalOrthogonalForm) -> Result<()> {
    let l = form.minus_count();
    if !l.is_multiple_of(2) {
        return Err(Error::OddNegativeMultiplicity {
            eigenvalue: -1.0,
            count: l,
        });
    }
    Ok(())
}

/// Block-diagonal factor with every angle divided by `2^level`; `−1` blocks
/// are paired into rotations by π first.
fn scaled_blocks(form: &CanonicalOrthogonalForm, level: u32) -> Matrix {
    let scale = 0.5f64.powi(level as i32);
    let mut blocks: Vec<Matrix> =
        std::iter::repeat_n(Matrix::identity(1), form.plus_count()).collect();
    blocks.extend((0..form.minus_count() / 2).map(|_| rotation(PI * scale)));
    blocks.extend(
        form.rotation_angles()
            .into_iter()
            .map(|a| rotation(a * scale)),
    );
    direct_sum(&blocks).expect("canonical form has at least one block")
}

/// Real orthogonal root of an orthogonal matrix whose `−1` eigenvalue has
/// even multiplicity.
pub fn orthogonal_real_root(q: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let form = orthogonal_canonical_form(q, tol)?;
    require_even_minus(&form)?;
    let d = scaled_blocks(&form, 1);
    Ok(&(&form.p * &d) * &form.p.transpose())
}

/// Successive `2^k`-th roots `P·D_k·Pᵀ` of an orthogonal matrix, `k = 0..=depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootTower {
    pub p: Matrix,
    /// `dk[k]` is `D_k`; `dk[0]` is the canonical block form itself.
    pub dk: Vec<Matrix>,
    pub depth: u32,
}

impl RootTower {
    /// `P · D_k · Pᵀ`, a `2^k`-th root of the input.
    pub fn level_root(&self, k: usize) -> Matrix {
        &(&self.p * &self.dk[k]) * &self.p.transpose()
    }

    /// `‖D_k − I‖_F`.
    pub fn distance_to_identity(&self, k: usize) -> f64 {
        let n = self.dk[k].rows();
        self.dk[k].distance(&Matrix::identity(n))
    }

    /// `‖(P·D_k·Pᵀ)^(2^k) − target‖_F`.
    pub fn power_residual(&self, k: usize, target: &Matrix) -> f64 {
        self.level_root(k)
            .pow2k(k as u32)
            .expect("tower levels are square")
            .distance(target)
    }
}

pub fn root_tower(q: &Matrix, depth: u32, tol: &Tolerances) -> Result<RootTower> {
    if depth == 0 || depth > MAX_TOWER_DEPTH {
        return Err(Error::InvalidParameter(format!(
            "tower depth must be in 1..={MAX_TOWER_DEPTH}, got {depth}"
        )));
    }
    let form = orthogonal_canonical_form(q, tol)?;
    require_even_minus(&form)?;
    let dk = (0..=depth).map(|k| scaled_blocks(&form, k)).collect();
    Ok(RootTower {
        p: form.p,
        dk,
        depth,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrthogonalClass {
    /// Only `±1` blocks: the matrix squares to the identity.
    InvolutoryOrthogonal,
    /// Rotation blocks present and an even number of `−1` blocks.
    HasRealOrthogonalRoot,
    /// Odd number of `−1` blocks; no root construction is available.
    NoRealRootConstruction,
}

impl OrthogonalClass {
    pub fn name(self) -> &'static str {
        match self {
            OrthogonalClass::InvolutoryOrthogonal => "InvolutoryOrthogonal",
            OrthogonalClass::HasRealOrthogonalRoot => "HasRealOrthogonalRoot",
            OrthogonalClass::NoRealRootConstruction => "NoRealRootConstruction",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: OrthogonalClass,
    /// Whether [`orthogonal_real_root`] applies (even `−1` count).
    pub root_eligible: bool,
}

pub fn classify_orthogonal(q: &Matrix, tol: &Tolerances) -> Result<Classification> {
    let form = orthogonal_canonical_form(q, tol)?;
    Ok(classify_form(&form))
}

pub fn classify_form(form: &CanonicalOrthogonalForm) -> Classification {
    let root_eligible = form.minus_count().is_multiple_of(2);
    let only_signs = form
        .blocks
        .iter()
        .all(|b| matches!(b, CanonicalBlock::PlusOne | CanonicalBlock::MinusOne));
    let class = if only_signs {
        OrthogonalClass::InvolutoryOrthogonal
    } else if root_eligible {
        OrthogonalClass::HasRealOrthogonalRoot
    } else {
        OrthogonalClass::NoRealRootConstruction
    };
    Classification {
        class,
        root_eligible,
    }
}
