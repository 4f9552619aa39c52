//! Idempotents built from block data, and their canonical similarity.
//!
//! For `M = [[A, B], [C, D]]` with `A`, `D` and both Schur complements
//! invertible, `M · (I ⊕ 0) · M⁻¹` equals
//!
//! ```text
//! [[ A·T,  −B·S       ],      S = (D − C·A⁻¹·B)⁻¹
//!  [ C·T,  −C·A⁻¹·B·S ]]      T = (A − B·D⁻¹·C)⁻¹
//! ```
//!
//! and `2P − I` is then involutory.

use rand::{Rng, RngExt};

use crate::error::{BlockName, Error, Result, SchurName};
use crate::families::Seed;
use crate::linalg::{direct_sum, is_idempotent, lu_invert, projector_basis, projector_rank, Lu};
use crate::matrix::Matrix;
use crate::tolerances::Tolerances;

/// `(A, B, C, D)` with `A: n×n`, `B: n×m`, `C: m×n`, `D: m×m`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockQuadruple {
    a: Matrix,
    b: Matrix,
    c: Matrix,
    d: Matrix,
}

impl BlockQuadruple {
    pub fn new(a: Matrix, b: Matrix, c: Matrix, d: Matrix) -> Result<Self> {
        let n = a.ensure_square()?;
        let m = d.ensure_square()?;
        if b.shape() != (n, m) || c.shape() != (m, n) {
            return Err(Error::DimensionMismatch(format!(
                "blocks must be A {n}x{n}, B {n}x{m}, C {m}x{n}, D {m}x{m}; got B {}x{} and C {}x{}",
                b.rows(),
                b.cols(),
                c.rows(),
                c.cols()
            )));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }
    pub fn b(&self) -> &Matrix {
        &self.b
    }
    pub fn c(&self) -> &Matrix {
        &self.c
    }
    pub fn d(&self) -> &Matrix {
        &self.d
    }

    /// `(n, m)`.
    pub fn orders(&self) -> (usize, usize) {
        (self.a.rows(), self.d.rows())
    }

    /// The assembled `[[A, B], [C, D]]`.
    pub fn assembled(&self) -> Matrix {
        Matrix::from_blocks(&self.a, &self.b, &self.c, &self.d).expect("shapes checked in new")
    }
}

/// `s = (D − C·A⁻¹·B)⁻¹` and `t = (A − B·D⁻¹·C)⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurPair {
    pub s: Matrix,
    pub t: Matrix,
}

struct SchurParts {
    pair: SchurPair,
    a_inv: Matrix,
    /// Largest Frobenius condition number among `A` and the two complements.
    condition: f64,
}

fn condition(x: &Matrix, x_inv: &Matrix) -> f64 {
    x.frobenius_norm() * x_inv.frobenius_norm()
}

fn schur_parts(q: &BlockQuadruple, tol: &Tolerances) -> Result<SchurParts> {
    let a_inv = lu_invert(&q.a, tol).map_err(|_| Error::SingularBlock(BlockName::A))?;
    let d_inv = lu_invert(&q.d, tol).map_err(|_| Error::SingularBlock(BlockName::D))?;
    let ca_inv = &q.c * &a_inv;
    let s_complement = &q.d - &(&ca_inv * &q.b);
    let s = lu_invert(&s_complement, tol).map_err(|_| Error::SingularSchur(SchurName::S))?;
    let t_complement = &q.a - &(&(&q.b * &d_inv) * &q.c);
    let t = lu_invert(&t_complement, tol).map_err(|_| Error::SingularSchur(SchurName::T))?;

    let kappa = condition(&q.a, &a_inv)
        .max(condition(&s_complement, &s))
        .max(condition(&t_complement, &t));

    // A⁻¹ + A⁻¹·B·S·C·A⁻¹ = T; the tolerance grows with the conditioning.
    let woodbury = &a_inv + &(&(&(&a_inv * &q.b) * &s) * &ca_inv);
    if !woodbury.approx_eq(&t, tol.eq_rtol * kappa) {
        return Err(Error::ConsistencyCheck(format!(
            "inverse identity residual {:e} exceeds tolerance",
            woodbury.distance(&t)
        )));
    }
    Ok(SchurParts {
        pair: SchurPair { s, t },
        a_inv,
        condition: kappa,
    })
}

pub fn schur_pair(q: &BlockQuadruple, tol: &Tolerances) -> Result<SchurPair> {
    schur_parts(q, tol).map(|p| p.pair)
}

/// Frobenius condition number of the worst of `A`, `D − C·A⁻¹·B` and
/// `A − B·D⁻¹·C`.
pub fn schur_condition(q: &BlockQuadruple, tol: &Tolerances) -> Result<f64> {
    schur_parts(q, tol).map(|p| p.condition)
}

/// The idempotent `[[A·T, −B·S], [C·T, −C·A⁻¹·B·S]]` of order `n + m`.
pub fn block_idempotent(q: &BlockQuadruple, tol: &Tolerances) -> Result<Matrix> {
    let SchurParts { pair, a_inv, .. } = schur_parts(q, tol)?;
    let SchurPair { s, t } = pair;
    let bs = &q.b * &s;
    let tl = &q.a * &t;
    let tr = -&bs;
    let bl = &q.c * &t;
    let br = -&(&(&q.c * &a_inv) * &bs);
    Matrix::from_blocks(&tl, &tr, &bl, &br)
}

/// `2p − I` for idempotent `p`.
pub fn involutory_from_idempotent(p: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let n = p.ensure_square()?;
    if !is_idempotent(p, tol) {
        return Err(Error::NotIdempotent);
    }
    Ok(&p.scale(2.0) - &Matrix::identity(n))
}

/// Closed-form member of the scalar-block family and its involution.
#[derive(Clone, Debug, PartialEq)]
pub struct ExampleFamily {
    pub p: Matrix,
    pub t: Matrix,
}

/// The quadruple `(a·I_n, b·[I_m; 0], c·[I_m | 0], d·I_m)`.
pub fn example_quadruple(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    n: usize,
    m: usize,
) -> Result<BlockQuadruple> {
    if m == 0 || n < m {
        return Err(Error::InvalidParameter(format!(
            "need n >= m >= 1, got n={n}, m={m}"
        )));
    }
    let embed = Matrix::from_fn(n, m, |i, j| if i == j { 1.0 } else { 0.0 });
    BlockQuadruple::new(
        Matrix::identity(n).scale(a),
        embed.scale(b),
        embed.transpose().scale(c),
        Matrix::identity(m).scale(d),
    )
}

/// Closed-form idempotent for scalar blocks, checked against
/// [`block_idempotent`] on the same quadruple.
pub fn example_family(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    n: usize,
    m: usize,
    tol: &Tolerances,
) -> Result<ExampleFamily> {
    if [a, b, c, d].iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("parameters must be finite".into()));
    }
    if m == 0 || n < m {
        return Err(Error::InvalidParameter(format!(
            "need n >= m >= 1, got n={n}, m={m}"
        )));
    }
    let ad = a * d;
    let det = ad - b * c;
    if ad.abs() <= tol.rank_tol {
        return Err(Error::DegenerateParameters(format!(
            "ad = {ad} must be nonzero"
        )));
    }
    if det.abs() <= tol.rank_tol {
        return Err(Error::DegenerateParameters(format!(
            "ad - bc = {det} must be nonzero"
        )));
    }

    let size = n + m;
    let mut p = Matrix::zeros(size, size);
    for i in 0..m {
        p[(i, i)] = ad / det;
        p[(i, n + i)] = -a * b / det;
        p[(n + i, i)] = c * d / det;
        p[(n + i, n + i)] = -b * c / det;
    }
    for i in m..n {
        p[(i, i)] = 1.0;
    }

    let general = block_idempotent(&example_quadruple(a, b, c, d, n, m)?, tol)?;
    if !p.approx_eq(&general, tol.eq_rtol) {
        return Err(Error::ConsistencyCheck(format!(
            "closed form differs from the block formula by {:e}",
            p.distance(&general)
        )));
    }
    let t = &p.scale(2.0) - &Matrix::identity(size);
    Ok(ExampleFamily { p, t })
}

/// `m⁻¹ · p · m = I_rank ⊕ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdempotentCanonical {
    pub m: Matrix,
    pub rank: usize,
}

impl IdempotentCanonical {
    pub fn projection(&self) -> Matrix {
        let n = self.m.rows();
        let d: Vec<f64> = (0..n)
            .map(|i| if i < self.rank { 1.0 } else { 0.0 })
            .collect();
        Matrix::diag(&d).expect("non-empty")
    }

    /// `m · (I_rank ⊕ 0) · m⁻¹`.
    pub fn reconstruct(&self, tol: &Tolerances) -> Result<Matrix> {
        Ok(&(&self.m * &self.projection()) * &lu_invert(&self.m, tol)?)
    }
}

/// Basis of `range(p)` followed by a basis of `range(I − p) = ker(p)`.
pub fn idempotent_canonicalize(p: &Matrix, tol: &Tolerances) -> Result<IdempotentCanonical> {
    let n = p.ensure_square()?;
    if !is_idempotent(p, tol) {
        return Err(Error::NotIdempotent);
    }
    let complement = &Matrix::identity(n) - p;
    let rank = projector_rank(p);
    let range = projector_basis(p, rank);
    let kernel = projector_basis(&complement, n - rank);
    if range.len() + kernel.len() != n {
        return Err(Error::NotIdempotent);
    }
    let mut columns = range;
    columns.extend(kernel);
    let m = Matrix::from_columns(&columns)?;
    if Lu::factor(&m, tol)?.is_singular() {
        return Err(Error::NotIdempotent);
    }
    Ok(IdempotentCanonical { m, rank })
}

fn uniform_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..=1.0))
}

/// Random quadruple with `A = U + 2n·I`, `D = U + 2m·I` and `B`, `C`
/// uniform on `[−1, 1]`. Draws whose [`schur_condition`] exceeds
/// `max_condition` (or that fail to invert) are discarded and redrawn.
pub fn sample_block_quadruple(
    n: usize,
    m: usize,
    max_condition: f64,
    seed: Seed,
    tol: &Tolerances,
) -> Result<BlockQuadruple> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter(format!(
            "need n, m >= 1, got n={n}, m={m}"
        )));
    }
    let mut rng = seed.rng();
    for _ in 0..1000 {
        let a = &uniform_matrix(n, n, &mut rng) + &Matrix::identity(n).scale(2.0 * n as f64);
        let d = &uniform_matrix(m, m, &mut rng) + &Matrix::identity(m).scale(2.0 * m as f64);
        let b = uniform_matrix(n, m, &mut rng);
        let c = uniform_matrix(m, n, &mut rng);
        let q = BlockQuadruple::new(a, b, c, d)?;
        if schur_condition(&q, tol).is_ok_and(|k| k <= max_condition) {
            return Ok(q);
        }
    }
    Err(Error::DegenerateParameters(
        "no well-conditioned quadruple in 1000 draws".into(),
    ))
}

/// `I_r ⊕ 0_(n−r)` conjugated by a random well-conditioned matrix.
pub fn sample_idempotent(n: usize, rank: usize, seed: Seed) -> Result<Matrix> {
    if n == 0 || rank > n {
        return Err(Error::InvalidParameter(format!(
            "need n >= 1 and rank <= n, got n={n}, rank={rank}"
        )));
    }
    let mut rng = seed.rng();
    let b = crate::families::sample_well_conditioned(n, &mut rng)?;
    let mut blocks = vec![];
    if rank > 0 {
        blocks.push(Matrix::identity(rank));
    }
    if rank < n {
        blocks.push(Matrix::zeros(n - rank, n - rank));
    }
    let proj = direct_sum(&blocks)?;
    Ok(&(&b * &proj) * &lu_invert(&b, &Tolerances::default())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_involutory;

    fn s(x: f64) -> Matrix {
        Matrix::identity(1).scale(x)
    }

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn quad(a: f64, b: f64, c: f64, d: f64) -> BlockQuadruple {
        BlockQuadruple::new(s(a), s(b), s(c), s(d)).unwrap()
    }

    #[test]
    fn schur_pair_examples() {
        let tol = Tolerances::default();
        let p = schur_pair(&quad(1.0, 1.0, 1.0, 2.0), &tol).unwrap();
        assert_eq!((p.s, p.t), (s(1.0), s(2.0)));

        let a = Matrix::diag(&[2.0, 4.0]).unwrap();
        let d = Matrix::diag(&[5.0]).unwrap();
        let q = BlockQuadruple::new(
            a.clone(),
            Matrix::zeros(2, 1),
            Matrix::zeros(1, 2),
            d.clone(),
        )
        .unwrap();
        let p = schur_pair(&q, &tol).unwrap();
        assert_eq!(p.s, lu_invert(&d, &tol).unwrap());
        assert_eq!(p.t, lu_invert(&a, &tol).unwrap());

        assert_eq!(
            schur_pair(&quad(1.0, 1.0, 1.0, 1.0), &tol),
            Err(Error::SingularSchur(SchurName::S))
        );
        assert_eq!(
            schur_pair(&quad(0.0, 1.0, 1.0, 1.0), &tol),
            Err(Error::SingularBlock(BlockName::A))
        );
        assert_eq!(
            schur_pair(&quad(1.0, 1.0, 1.0, 0.0), &tol),
            Err(Error::SingularBlock(BlockName::D))
        );
    }

    #[test]
    fn quadruple_shape_checks() {
        assert!(matches!(
            BlockQuadruple::new(
                Matrix::identity(2),
                Matrix::zeros(1, 1),
                Matrix::zeros(1, 2),
                s(1.0)
            ),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            BlockQuadruple::new(
                Matrix::zeros(2, 1),
                Matrix::zeros(2, 1),
                Matrix::zeros(1, 2),
                s(1.0)
            ),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn block_idempotent_examples() {
        let tol = Tolerances::default();
        let p = block_idempotent(&quad(1.0, 1.0, 1.0, 2.0), &tol).unwrap();
        assert_eq!(p, m(&[&[2.0, -1.0], &[2.0, -1.0]]));
        assert_eq!(&p * &p, p);

        let p = block_idempotent(&quad(2.0, 1.0, 1.0, 1.0), &tol).unwrap();
        assert_eq!(p, m(&[&[2.0, -2.0], &[1.0, -1.0]]));
        assert_eq!(&p * &p, p);

        let q = BlockQuadruple::new(
            Matrix::diag(&[2.0, 3.0]).unwrap(),
            Matrix::zeros(2, 1),
            Matrix::zeros(1, 2),
            s(7.0),
        )
        .unwrap();
        let p = block_idempotent(&q, &tol).unwrap();
        assert_eq!(p, Matrix::diag(&[1.0, 1.0, 0.0]).unwrap());
    }

    #[test]
    fn involutory_from_idempotent_examples() {
        let tol = Tolerances::default();
        assert_eq!(
            involutory_from_idempotent(&Matrix::identity(3), &tol).unwrap(),
            Matrix::identity(3)
        );
        let t = involutory_from_idempotent(&m(&[&[2.0, -1.0], &[2.0, -1.0]]), &tol).unwrap();
        assert_eq!(t, m(&[&[3.0, -2.0], &[4.0, -3.0]]));
        assert!(is_involutory(&t, &tol));
        assert_eq!(
            involutory_from_idempotent(&Matrix::diag(&[1.0, 0.0]).unwrap(), &tol).unwrap(),
            Matrix::diag(&[1.0, -1.0]).unwrap()
        );
        assert_eq!(
            involutory_from_idempotent(&Matrix::diag(&[2.0, 0.0]).unwrap(), &tol),
            Err(Error::NotIdempotent)
        );
    }

    #[test]
    fn example_family_examples() {
        let tol = Tolerances::default();
        let f = example_family(1.0, 1.0, 1.0, 2.0, 2, 1, &tol).unwrap();
        let expected = m(&[&[2.0, 0.0, -1.0], &[0.0, 1.0, 0.0], &[2.0, 0.0, -1.0]]);
        assert!(f.p.approx_eq(&expected, 1e-12));
        assert!(is_involutory(&f.t, &tol));

        let f = example_family(1.0, 0.0, 0.0, 1.0, 3, 2, &tol).unwrap();
        assert_eq!(f.p, Matrix::diag(&[1.0, 1.0, 1.0, 0.0, 0.0]).unwrap());

        assert!(matches!(
            example_family(1.0, 1.0, 1.0, 1.0, 2, 1, &tol),
            Err(Error::DegenerateParameters(_))
        ));
        assert!(matches!(
            example_family(0.0, 1.0, 1.0, 1.0, 2, 1, &tol),
            Err(Error::DegenerateParameters(_))
        ));
        assert!(matches!(
            example_family(1.0, 1.0, 1.0, 2.0, 1, 2, &tol),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn example_family_square_blocks() {
        let tol = Tolerances::default();
        let f = example_family(2.0, -1.0, 3.0, 0.5, 2, 2, &tol).unwrap();
        assert!(is_idempotent(&f.p, &tol));
    }

    #[test]
    fn canonicalize_examples() {
        let tol = Tolerances::default();
        let c = idempotent_canonicalize(&Matrix::diag(&[1.0, 0.0]).unwrap(), &tol).unwrap();
        assert_eq!((c.m, c.rank), (Matrix::identity(2), 1));
        let c = idempotent_canonicalize(&m(&[&[2.0, -1.0], &[2.0, -1.0]]), &tol).unwrap();
        assert_eq!((c.m.clone(), c.rank), (m(&[&[1.0, 1.0], &[1.0, 2.0]]), 1));
        assert!(c
            .reconstruct(&tol)
            .unwrap()
            .approx_eq(&m(&[&[2.0, -1.0], &[2.0, -1.0]]), 1e-14));
        let c = idempotent_canonicalize(&Matrix::identity(3), &tol).unwrap();
        assert_eq!((c.m, c.rank), (Matrix::identity(3), 3));
        let c = idempotent_canonicalize(&Matrix::zeros(2, 2), &tol).unwrap();
        assert_eq!((c.m, c.rank), (Matrix::identity(2), 0));
        assert_eq!(
            idempotent_canonicalize(&Matrix::diag(&[2.0, 1.0]).unwrap(), &tol),
            Err(Error::NotIdempotent)
        );
    }
}
