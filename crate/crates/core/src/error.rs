use thiserror::Error;

/// Which block of a [`BlockQuadruple`](crate::idempotent::BlockQuadruple) failed to invert.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockName {
    A,
    D,
}

/// Which Schur complement failed to invert.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchurName {
    /// `D - C A⁻¹ B`
    S,
    /// `A - B D⁻¹ C`
    T,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("direct sum of an empty block list")]
    EmptyBlockList,
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is singular (pivot {index} below threshold)")]
    Singular { index: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("Jacobi iteration did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix is not orthogonal")]
    NotOrthogonal,
    #[error("matrix is not involutory")]
    NotInvolutory,
    #[error("matrix is not idempotent")]
    NotIdempotent,
    #[error("negative eigenvalue {eigenvalue} has odd multiplicity {count}")]
    OddNegativeMultiplicity { eigenvalue: f64, count: usize },
    #[error("eigenvalue {eigenvalue} is too close to the sign threshold to classify")]
    ClusterAmbiguous { eigenvalue: f64 },
    #[error("block {0:?} is singular")]
    SingularBlock(BlockName),
    #[error("Schur complement inverse {0:?} does not exist")]
    SingularSchur(SchurName),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("consistency check failed: {0}")]
    ConsistencyCheck(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable variant name, used by the CLI and the C interface.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotSquare { .. } => "NotSquare",
            Error::EmptyBlockList => "EmptyBlockList",
            Error::NonFinite { .. } => "NonFinite",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Singular { .. } => "Singular",
            Error::NotSymmetric => "NotSymmetric",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NotOrthogonal => "NotOrthogonal",
            Error::NotInvolutory => "NotInvolutory",
            Error::NotIdempotent => "NotIdempotent",
            Error::OddNegativeMultiplicity { .. } => "OddNegativeMultiplicity",
            Error::ClusterAmbiguous { .. } => "ClusterAmbiguous",
            Error::SingularBlock(_) => "SingularBlock",
            Error::SingularSchur(_) => "SingularSchur",
            Error::DegenerateParameters(_) => "DegenerateParameters",
            Error::ConsistencyCheck(_) => "ConsistencyCheck",
            Error::Parse(_) => "Parse",
        }
    }

    /// `true` for plumbing failures (bad input text or shapes) as opposed to
    /// mathematical obstructions.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::NonFinite { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
