use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value left the representable floating point range.
    #[error("range error: value overflows at |z| = {modulus:e}")]
    Range { modulus: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("non-finite integrand value at t = {t:e}")]
    NonFinite { t: f64 },

    #[error("undefined result: {0}")]
    Undefined(String),

    #[error("matrix is not Hermitian (asymmetry norm {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("Cholesky factorisation failed after jitter escalation to {jitter:e}")]
    Conditioning { jitter: f64 },

    #[error("symbol is not a self-map of the upper half-plane: {0}")]
    SelfMap(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("compactness formulas disagree: direct ratio {direct}, branch formula {branch_re} + {branch_im}i")]
    FormulaInconsistency {
        direct: f64,
        branch_re: f64,
        branch_im: f64,
    },

    #[error("internal consistency: {0}")]
    Internal(String),
}
