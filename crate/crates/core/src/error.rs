use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("a defined on even integers only (got {0})")]
    OddInteger(i64),

    #[error("unsupported signature (q,p)=({q},{p}): {reason}")]
    UnsupportedSignature { q: usize, p: usize, reason: &'static str },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular or ill-conditioned gram (condition number {cond:.3e})")]
    SingularGram { cond: f64 },

    #[error("not a fundamental symmetry: {0}")]
    NotFundamentalSymmetry(String),

    #[error("degenerate projection product (condition number {cond:.3e})")]
    DegenerateProjection { cond: f64 },

    #[error("Y_R violates Y_R^T = s eps_F Y_R (defect {defect:.3e})")]
    MajoranaSymmetry { defect: f64 },

    #[error("element is not Krein-unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("operator is not a self-adjoint one-form (residual {residual:.3e})")]
    NotOneForm { residual: f64 },

    #[error("non-positive coefficient {name} = {value}")]
    NonPositiveCoefficient { name: &'static str, value: f64 },

    #[error("eigenvalue grid of {points} points exceeds the limit of {limit}")]
    GridTooLarge { points: u128, limit: u128 },

    #[error("axiom failure: {0}")]
    AxiomFailure(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
