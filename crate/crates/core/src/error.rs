use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |H - H†| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (eigenvalue or pivot {0:e})")]
    NotPsd(f64),

    #[error("operator is not a contraction (norm {0})")]
    NotContraction(f64),

    #[error("matrix is not unitary (max |U†U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(&'static str),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(&'static str),

    #[error("observable has zero Hilbert-Schmidt norm")]
    ZeroObservable,

    #[error("no shot record for branch (i = {ensemble:?}, k = {kraus})")]
    MissingBranch {
        ensemble: Option<usize>,
        kraus: usize,
    },

    #[error("recovered value has imaginary residue {0:e}")]
    InternalConsistency(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
