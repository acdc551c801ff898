use thiserror::Error;

/// Errors raised by the algebra, the engine and the closed formulas.
///
/// Validation problems with a configuration are not errors: they are
/// reported as [`Violation`](crate::fixed_locus::Violation) values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("character modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("shifted entry ({p},{q}) falls outside a diamond of dimension {dim}")]
    ShiftOutOfRange { p: usize, q: usize, dim: usize },

    #[error("unsupported order {0}; expected one of 2, 3, 4, 6")]
    UnsupportedOrder(u32),

    #[error("unsupported residual order {0}; expected 1, 2 or 3")]
    UnsupportedResidualOrder(u32),

    #[error("cannot split {0} non-invariant holomorphic forms evenly between conjugate characters; supply explicit character dimensions")]
    UnbalancedSplit(u64),

    #[error("non-crepant local data: age {num}/{den} is not an integer in sector {element}")]
    NonCrepant { element: u32, num: i64, den: i64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parity violation: {0}")]
    Parity(String),

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("configuration is invalid: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
