use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by lattice, classifier and period-domain operations.
///
/// Variants other than [`Error::InvariantViolation`] describe a violated
/// precondition on the caller's input. `InvariantViolation` means an internal
/// consistency check failed, which indicates a bug or a false mathematical claim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("gram matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("gram matrix has odd diagonal entry at index {index}")]
    OddDiagonal { index: usize },

    #[error("zero vector is not allowed here")]
    ZeroVector,

    #[error("null functional: vector pairs to zero with the whole lattice")]
    NullFunctional,

    #[error("degenerate form (nullity {nullity})")]
    Degenerate { nullity: usize },

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("non-integral reflection: (e,e) = {norm} does not divide 2(x,e) = {twice_pairing}")]
    NonIntegralReflection { norm: BigInt, twice_pairing: BigInt },

    #[error("vector is not isotropic: (x,x) = {norm}")]
    NotIsotropic { norm: BigInt },

    #[error("vector is not primitive: content {content}")]
    NotPrimitive { content: BigInt },

    #[error("vector does not lie in the given sublattice")]
    NotInSublattice,

    #[error("orthogonality violated: {0}")]
    NotOrthogonal(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid period: {0}")]
    InvalidPeriod(String),

    #[error("period is special; witness {witness:?}")]
    SpecialPeriod { witness: Vec<BigInt> },

    #[error("search budget exhausted after {attempts} attempts: {reason}")]
    BudgetExhausted { attempts: usize, reason: String },

    #[error("oracle ranges did not stabilize below {cap}")]
    OracleUnstable { cap: u64 },

    #[error("iteration cap {cap} exceeded (best error {best_error:e})")]
    IterationCap { cap: usize, best_error: f64 },

    #[error("precision exhausted at {bits} bits: verified error {verified:e} >= epsilon {epsilon:e}")]
    PrecisionExhausted { bits: u32, verified: f64, epsilon: f64 },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for internal assertion failures, false for bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
