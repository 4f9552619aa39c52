//! Real square roots of involutory, symmetric and orthogonal matrices, and
//! idempotent/involutory matrices built from block data.
//!
//! Every construction returns plain dense matrices so the caller can check
//! it by direct multiplication; the [`cli`] module prints those residuals.
//!
//! ```
//! use matroot::{involutory_real_root, Matrix, RootOptions, Tolerances};
//!
//! # fn main() -> matroot::Result<()> {
//! let tol = Tolerances::default();
//! let a = Matrix::from_rows(&[
//!     [3.0, 2.0, 0.0, 0.0],
//!     [-4.0, -3.0, 0.0, 0.0],
//!     [0.0, 0.0, 3.0, 2.0],
//!     [0.0, 0.0, -4.0, -3.0],
//! ])?;
//! let r = involutory_real_root(&a, &RootOptions::default(), &tol)?;
//! assert!((&r * &r).approx_eq(&a, 1e-12));
//! # Ok(())
//! # }
//! ```

pub mod canonical;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod families;
pub mod idempotent;
pub mod linalg;
pub mod matrix;
pub mod roots;
pub mod tolerances;

pub use canonical::{orthogonal_canonical_form, CanonicalBlock, CanonicalOrthogonalForm};
pub use eigen::{symmetric_eig, SpectralDecomposition};
pub use error::{BlockName, Error, Result, SchurName};
pub use families::{InvolutoryParam, Seed, Sign};
pub use idempotent::{
    block_idempotent, example_family, idempotent_canonicalize, involutory_from_idempotent,
    schur_pair, BlockQuadruple, SchurPair,
};
pub use linalg::{det, direct_sum, is_idempotent, is_involutory, is_orthogonal, lu_invert};
pub use matrix::Matrix;
pub use roots::{
    classify_orthogonal, involutory_eigenbasis, involutory_real_root, orthogonal_real_root,
    root_tower, symmetric_real_root, Classification, OrthogonalClass, RootOptions, RootTower,
};
pub use tolerances::Tolerances;
