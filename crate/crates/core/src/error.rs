use thiserror::Error;

/// Everything that can go wrong inside the engine.
///
/// Variants are grouped by the exit code the command-line driver maps them to
/// (see [`Error::exit_code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid shape bitstring `{0}`")]
    InvalidShape(String),

    #[error("{what} would need {size} monomials, budget is {cap}")]
    BudgetExceeded { what: String, size: u128, cap: u64 },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("polynomials are over different alphabets")]
    AlphabetMismatch,
    #[error("indeterminate X{index} is not covered by {available} substitution image(s)")]
    UncoveredIndeterminate { index: usize, available: usize },
    #[error("the zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),
    #[error("input #{0} is the zero polynomial")]
    ZeroInput(usize),
    #[error("inputs #{0} and #{1} are equal")]
    DuplicateInput(usize, usize),
    #[error("input #{0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error("inputs do not share one degree")]
    MixedDegrees,
    #[error("bound {bound} is below the largest input degree {needed}")]
    BoundTooSmall { bound: u32, needed: u32 },
    #[error("empty input")]
    EmptyInput,
    #[error("arity mismatch: {0}")]
    Arity(String),

    #[error("seed is not reduced: {0}")]
    SeedNotReduced(String),
    #[error("seed element #{0} does not lie in the subalgebra")]
    SeedNotInSubalgebra(usize),
    #[error("seed is algebraically dependent: {0}")]
    SeedDependent(String),
    #[error("seed hypothesis violated at degree {degree}: `{element}` is not generated by the seed")]
    SeedHypothesis { degree: u32, element: String },

    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. }
            | Error::UnknownSymbol(_)
            | Error::InvalidAlphabet(_)
            | Error::InvalidShape(_) => 2,
            Error::BudgetExceeded { .. } => 3,
            Error::Invariant(_) => 5,
            _ => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
