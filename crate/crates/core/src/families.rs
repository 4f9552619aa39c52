//! Explicit 2×2 families and seeded generators of test inputs.
//!
//! Every real involutory 2×2 matrix is one of
//! `[[a, b], [(1−a²)/b, −a]]` (b ≠ 0), `[[±1, 0], [c, ∓1]]`, or `±I`, and
//! every real 2×2 square root of `−I` is `Ψ(a, b) = [[a, −b], [(1+a²)/b, −a]]`.

use std::f64::consts::PI;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::direct_sum;
use crate::matrix::Matrix;

/// Smallest admissible `|b|` in the `(1 ± a²)/b` entries.
pub const MIN_ABS_B: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_value(v: f64) -> Result<Sign> {
        if v == 1.0 {
            Ok(Sign::Plus)
        } else if v == -1.0 {
            Ok(Sign::Minus)
        } else {
            Err(Error::InvalidParameter(format!(
                "sign must be +1 or -1, got {v}"
            )))
        }
    }
}

/// The three branches of the real involutory 2×2 classification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InvolutoryParam {
    /// `[[a, b], [(1−a²)/b, −a]]`
    General { a: f64, b: f64 },
    /// `[[s, 0], [c, −s]]`
    LowerTriangular { sign: Sign, c: f64 },
    /// `s·I₂`
    Scalar(Sign),
}

fn check_b(a: f64, b: f64) -> Result<()> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "parameters must be finite, got a={a}, b={b}"
        )));
    }
    if b.abs() < MIN_ABS_B {
        return Err(Error::InvalidParameter(format!(
            "|b| must be at least {MIN_ABS_B:e}, got {b}"
        )));
    }
    Ok(())
}

pub fn involutory_2x2(p: InvolutoryParam) -> Result<Matrix> {
    match p {
        InvolutoryParam::General { a, b } => {
            check_b(a, b)?;
            Matrix::from_rows(&[[a, b], [(1.0 - a * a) / b, -a]])
        }
        InvolutoryParam::LowerTriangular { sign, c } => {
            let s = sign.value();
            Matrix::from_rows(&[[s, 0.0], [c, -s]])
        }
        InvolutoryParam::Scalar(sign) => Ok(Matrix::identity(2).scale(sign.value())),
    }
}

/// `Ψ(a, b) = [[a, −b], [(1+a²)/b, −a]]`, a real square root of `−I₂`.
pub fn psi(a: f64, b: f64) -> Result<Matrix> {
    check_b(a, b)?;
    Matrix::from_rows(&[[a, -b], [(1.0 + a * a) / b, -a]])
}

/// `[[cos θ, sin θ], [−sin θ, cos θ]]`.
///
/// # Panics
/// Panics if `theta` is not finite.
pub fn rotation(theta: f64) -> Matrix {
    let (s, c) = theta.sin_cos();
    Matrix::from_rows(&[[c, s], [-s, c]]).expect("rotation angle must be finite")
}

/// `[[cos θ, sin θ], [sin θ, −cos θ]]`: symmetric, orthogonal and involutory.
///
/// # Panics
/// Panics if `theta` is not finite.
pub fn reflection(theta: f64) -> Matrix {
    let (s, c) = theta.sin_cos();
    Matrix::from_rows(&[[c, s], [s, -c]]).expect("reflection angle must be finite")
}

/// Draws `(a, b)` with `a ~ U[−10, 10]`, `|b| ~ U[1e−3, 10]` and a fair sign on `b`.
pub fn sample_ab<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let a = rng.random_range(-10.0..=10.0);
    let mag = rng.random_range(1e-3..=10.0);
    let b = if rng.random_bool(0.5) { mag } else { -mag };
    (a, b)
}

fn sample_sign<R: Rng + ?Sized>(rng: &mut R) -> Sign {
    if rng.random_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Draws a 2×2 involution parameter: the general branch with
/// probability 0.8, each degenerate branch with probability 0.1.
pub fn sample_involutory_param<R: Rng + ?Sized>(rng: &mut R) -> InvolutoryParam {
    let u: f64 = rng.random();
    if u < 0.8 {
        let (a, b) = sample_ab(rng);
        InvolutoryParam::General { a, b }
    } else if u < 0.9 {
        InvolutoryParam::LowerTriangular {
            sign: sample_sign(rng),
            c: rng.random_range(-10.0..=10.0),
        }
    } else {
        InvolutoryParam::Scalar(sample_sign(rng))
    }
}

pub fn sample_involutory_2x2(seed: Seed) -> Matrix {
    let p = sample_involutory_param(&mut seed.rng());
    involutory_2x2(p).expect("sampled parameters satisfy |b| >= 1e-3")
}

fn dims_error(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

/// Random orthogonal matrix: a rotation with angle `U[−π, π]` in every
/// coordinate plane, followed by independent row sign flips.
pub fn sample_orthogonal_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Matrix> {
    if n == 0 {
        return Err(dims_error("n must be at least 1".into()));
    }
    let mut m = Matrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            let (s, c) = rng.random_range(-PI..=PI).sin_cos();
            for k in 0..n {
                let (x, y) = (m[(i, k)], m[(j, k)]);
                m[(i, k)] = c * x + s * y;
                m[(j, k)] = -s * x + c * y;
            }
        }
    }
    for i in 0..n {
        if rng.random_bool(0.5) {
            for k in 0..n {
                m[(i, k)] = -m[(i, k)];
            }
        }
    }
    Ok(m)
}

pub fn sample_orthogonal(n: usize, seed: Seed) -> Result<Matrix> {
    sample_orthogonal_with(n, &mut seed.rng())
}

/// `P · (I_plus ⊕ −I_minus ⊕ rotation(α₁) ⊕ …) · Pᵀ` for a random orthogonal `P`.
pub fn sample_orthogonal_with_spectrum(
    plus: usize,
    minus: usize,
    angles: &[f64],
    seed: Seed,
) -> Result<Matrix> {
    let n = plus + minus + 2 * angles.len();
    if n == 0 {
        return Err(dims_error("empty spectrum".into()));
    }
    let mut rng = seed.rng();
    let p = sample_orthogonal_with(n, &mut rng)?;
    let mut blocks = Vec::new();
    blocks.extend(std::iter::repeat_n(Matrix::identity(1), plus));
    blocks.extend(std::iter::repeat_n(Matrix::identity(1).scale(-1.0), minus));
    blocks.extend(angles.iter().map(|&t| rotation(t)));
    let c = direct_sum(&blocks)?;
    Ok(&(&p * &c) * &p.transpose())
}

/// Symmetric `QᵀΛQ` whose spectrum has `n − 2·pairs` eigenvalues in
/// `U[0.1, 10]` and `pairs` negative eigenvalues `−U[0.5, 10]`, each repeated
/// twice.
pub fn sample_symmetric_paired(n: usize, num_negative_pairs: usize, seed: Seed) -> Result<Matrix> {
    if n == 0 || 2 * num_negative_pairs > n {
        return Err(dims_error(format!(
            "need n >= 1 and 2*pairs <= n, got n={n}, pairs={num_negative_pairs}"
        )));
    }
    let mut rng = seed.rng();
    let q = sample_orthogonal_with(n, &mut rng)?;
    let mut lambda: Vec<f64> = (0..n - 2 * num_negative_pairs)
        .map(|_| rng.random_range(0.1..=10.0))
        .collect();
    for _ in 0..num_negative_pairs {
        let mu = rng.random_range(0.5..=10.0);
        lambda.push(-mu);
        lambda.push(-mu);
    }
    let s = &(&q.transpose() * &Matrix::diag(&lambda)?) * &q;
    Ok((&s + &s.transpose()).scale(0.5))
}

/// Well-conditioned invertible matrix `Q₁ · diag(σ) · Q₂` with `σ ~ U[0.5, 2]`.
pub fn sample_well_conditioned<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Matrix> {
    let q1 = sample_orthogonal_with(n, rng)?;
    let q2 = sample_orthogonal_with(n, rng)?;
    let sigma: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..=2.0)).collect();
    Ok(&(&q1 * &Matrix::diag(&sigma)?) * &q2)
}

/// Involutory `B · diag(1,…,1,−1,…,−1) · B⁻¹` with `minus` negative entries
/// and well-conditioned `B`.
pub fn sample_involutory(n: usize, minus: usize, seed: Seed) -> Result<Matrix> {
    if n == 0 || minus > n {
        return Err(dims_error(format!(
            "need 1 <= n and minus <= n, got n={n}, minus={minus}"
        )));
    }
    let mut rng = seed.rng();
    let b = sample_well_conditioned(n, &mut rng)?;
    let signs: Vec<f64> = (0..n)
        .map(|i| if i < n - minus { 1.0 } else { -1.0 })
        .collect();
    let binv = crate::linalg::lu_invert(&b, &Default::default())?;
    Ok(&(&b * &Matrix::diag(&signs)?) * &binv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{det, involutory_residual, is_involutory, is_orthogonal};
    use crate::Tolerances;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn involutory_examples() {
        let g = involutory_2x2(InvolutoryParam::General { a: 3.0, b: 2.0 }).unwrap();
        assert_eq!(g, m(&[&[3.0, 2.0], &[-4.0, -3.0]]));
        assert_eq!(&g * &g, Matrix::identity(2));
        assert_eq!(
            involutory_2x2(InvolutoryParam::Scalar(Sign::Plus)).unwrap(),
            Matrix::identity(2)
        );
        let l = involutory_2x2(InvolutoryParam::LowerTriangular {
            sign: Sign::Plus,
            c: 5.0,
        })
        .unwrap();
        assert_eq!(l, m(&[&[1.0, 0.0], &[5.0, -1.0]]));
        assert_eq!(&l * &l, Matrix::identity(2));
    }

    #[test]
    fn general_branch_rejects_small_b() {
        assert!(involutory_2x2(InvolutoryParam::General { a: 1.0, b: 0.0 }).is_err());
        assert!(involutory_2x2(InvolutoryParam::General { a: 1.0, b: 1e-13 }).is_err());
        assert!(psi(0.0, 0.0).is_err());
        assert!(psi(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn psi_examples() {
        let minus_i = Matrix::identity(2).scale(-1.0);
        let p = psi(0.0, 1.0).unwrap();
        assert_eq!(p, m(&[&[0.0, -1.0], &[1.0, 0.0]]));
        assert_eq!(&p * &p, minus_i);
        let p = psi(1.0, 2.0).unwrap();
        assert_eq!(p, m(&[&[1.0, -2.0], &[1.0, -1.0]]));
        assert_eq!(&p * &p, minus_i);
        assert_eq!(psi(0.0, -1.0).unwrap(), psi(0.0, 1.0).unwrap().transpose());
    }

    #[test]
    fn rotation_and_reflection_examples() {
        assert_eq!(rotation(0.0), Matrix::identity(2));
        assert!(rotation(PI).approx_eq(&Matrix::identity(2).scale(-1.0), 1e-15));
        assert!(rotation(PI / 2.0).approx_eq(&m(&[&[0.0, 1.0], &[-1.0, 0.0]]), 1e-15));
        assert_eq!(reflection(0.0), Matrix::diag(&[1.0, -1.0]).unwrap());
        assert!(reflection(PI / 2.0).approx_eq(&m(&[&[0.0, 1.0], &[1.0, 0.0]]), 1e-15));
        let r = reflection(0.7);
        assert!((&r * &r).approx_eq(&Matrix::identity(2), 1e-15));
    }

    #[test]
    fn samplers_are_deterministic() {
        assert_eq!(
            sample_orthogonal(5, Seed(9)).unwrap(),
            sample_orthogonal(5, Seed(9)).unwrap()
        );
        assert_ne!(
            sample_orthogonal(5, Seed(9)).unwrap(),
            sample_orthogonal(5, Seed(10)).unwrap()
        );
        assert_eq!(
            sample_involutory_2x2(Seed(1)),
            sample_involutory_2x2(Seed(1))
        );
    }

    #[test]
    fn sampled_orthogonal_2x2() {
        let tol = Tolerances::default();
        for s in 0..20 {
            let q = sample_orthogonal(2, Seed(s)).unwrap();
            assert!(is_orthogonal(&q, &tol));
            assert!((det(&q, &tol).unwrap().abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sampled_involutory_2x2_squares_to_identity() {
        let tol = Tolerances::default();
        for s in 0..50 {
            let r = sample_involutory_2x2(Seed(s));
            assert!(
                is_involutory(&r, &tol),
                "seed {s}: residual {}",
                involutory_residual(&r).unwrap()
            );
        }
    }

    #[test]
    fn sampler_dimension_errors() {
        assert!(sample_orthogonal(0, Seed(0)).is_err());
        assert!(sample_symmetric_paired(3, 2, Seed(0)).is_err());
        assert!(sample_involutory(2, 3, Seed(0)).is_err());
    }
}
