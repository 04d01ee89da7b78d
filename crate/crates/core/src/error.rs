use std::fmt;

/// Errors reported by field construction, linear algebra, geometry and
/// the counting engines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The requested characteristic is not a prime number.
    NotPrime(u64),
    /// The requested field order exceeds the supported maximum.
    Unsupported(String),
    /// No fixed modulus is on record for this extension field and none
    /// was supplied by the caller.
    NoFixedModulus { p: u64, e: u32 },
    /// A supplied modulus is not monic irreducible over GF(p).
    BadModulus(String),
    /// A dimension argument is outside the valid range.
    BadDimension(String),
    /// The matrix does not have full row rank.
    NotFullRank,
    /// Operands belong to different fields.
    FieldMismatch,
    /// Three of the supplied points are collinear.
    DegeneratePosition,
    /// A linear system that should have a one-dimensional solution space
    /// does not; indicates a bug in the caller.
    RankDeficient,
    /// The operation requires characteristic two.
    OddCharacteristic,
    /// The conic is degenerate.
    Degenerate,
    /// The search or enumeration exceeds the configured feasibility budget.
    TooLarge(String),
    /// Evaluation points must be pairwise distinct.
    DuplicateEvalPoint,
    /// Column multipliers must be nonzero.
    ZeroMultiplier,
    /// The supplied points are not in general position.
    NotGeneralPosition,
    /// Puncturing dropped the code dimension.
    DimensionDrop,
    /// The code is not MDS.
    NotMds,
    /// The code is too short for the recognition procedure to be
    /// meaningful.
    TooShort(usize),
    /// The 2x2 matrix of a Mobius transformation is singular.
    SingularG,
    /// A parameter combination violates an operation's range.
    OutOfRange(String),
    /// No closed formula is available for this length.
    UnsupportedLength(usize),
    /// The field order is not a power of two.
    NotPowerOfTwo(u64),
    /// A documented precondition was violated.
    PreconditionViolated(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::NoFixedModulus { p, e } => {
                write!(f, "no fixed modulus for GF({p}^{e}); supply one explicitly")
            }
            Error::BadModulus(msg) => write!(f, "bad modulus: {msg}"),
            Error::BadDimension(msg) => write!(f, "bad dimension: {msg}"),
            Error::NotFullRank => write!(f, "matrix does not have full row rank"),
            Error::FieldMismatch => write!(f, "operands belong to different fields"),
            Error::DegeneratePosition => write!(f, "three of the points are collinear"),
            Error::RankDeficient => write!(f, "linear system is rank deficient"),
            Error::OddCharacteristic => write!(f, "operation requires characteristic two"),
            Error::Degenerate => write!(f, "conic is degenerate"),
            Error::TooLarge(msg) => write!(f, "search too large: {msg}"),
            Error::DuplicateEvalPoint => write!(f, "evaluation points must be distinct"),
            Error::ZeroMultiplier => write!(f, "column multipliers must be nonzero"),
            Error::NotGeneralPosition => write!(f, "points are not in general position"),
            Error::DimensionDrop => write!(f, "puncturing dropped the code dimension"),
            Error::NotMds => write!(f, "code is not MDS"),
            Error::TooShort(n) => write!(f, "code length {n} is too short (need n >= 5)"),
            Error::SingularG => write!(f, "matrix of the Mobius transformation is singular"),
            Error::OutOfRange(msg) => write!(f, "out of range: {msg}"),
            Error::UnsupportedLength(n) => write!(f, "no closed formula for length {n}"),
            Error::NotPowerOfTwo(q) => write!(f, "{q} is not a power of two"),
            Error::PreconditionViolated(msg) => write!(f, "precondition violated: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
