use thiserror::Error;

/// Errors raised across the library.
///
/// Variants are grouped by the layer that raises them; positions and indices
/// in payloads are 1-based, matching how bases and words are written.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // exact numbers
    #[error("the zero polynomial has no roots to isolate")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree (gcd with its derivative is nonconstant)")]
    NotSquarefree,
    #[error("interval does not isolate a simple root of the polynomial")]
    InvalidIsolator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    // number fields
    #[error("elements belong to different number fields")]
    FieldMismatch,
    #[error("element is not invertible: the minimal polynomial is reducible")]
    NotInvertible,
    #[error("numeric root finder did not converge for the minimal polynomial")]
    RootFindingFailed,
    #[error("the designated root of the minimal polynomial is not greater than one")]
    RootNotGreaterThanOne,
    #[error("the minimal polynomial has no real root greater than one")]
    NoRootAboveOne,

    // bases
    #[error("beta_{0} is not greater than one")]
    BetaNotGreaterThanOne(usize),
    #[error("the product of the betas is not the field generator")]
    DeltaMismatch,
    #[error("malformed base configuration: {0}")]
    MalformedConfig(String),

    // expansions and words
    #[error("input out of range: {0}")]
    OutOfRange(String),
    #[error("word is truncated, not eventually periodic")]
    NonPeriodicWord,
    #[error("digit {digit} at position {position} is not below its base")]
    DigitOutOfRange { position: usize, digit: u32 },
    #[error("value is not a digit of the alphabet")]
    DigitNotInAlphabet,
    #[error("expansion did not terminate within the step cap; finiteness is undecided")]
    Undecided,
    #[error("cannot parse digit word from {0:?}")]
    ParseWord(String),

    // certificates
    #[error("expansion of rational #{0} did not close within the step cap")]
    ExpansionDidNotClose(usize),
    #[error("certificate determinant vanishes identically; choose other rationals")]
    DegenerateChoice,
    #[error("expansion is not purely periodic")]
    NotPurelyPeriodic,
    #[error("expected {expected} rationals, got {got}")]
    WrongArity { expected: usize, got: usize },

    // rewriting
    #[error("delta-expansion period did not close within the step cap")]
    PeriodDidNotClose,
    #[error("rewriting invariant violated: {0}")]
    RewriteFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
