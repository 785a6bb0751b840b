use thiserror::Error;

/// Broad failure classes, used by front ends to pick exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input text (geometry documents, divisor expressions, numbers).
    Parse,
    /// Well-formed input that violates a mathematical precondition.
    Domain,
    /// The prime catalog or cone data contradict each other.
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("gram matrix is not square")]
    NonSquareGram,

    #[error("gram matrix is not symmetric")]
    NonSymmetricGram,

    #[error("signature is ({pos}, {neg}, {zero}), expected (1, {expected_neg}, 0)")]
    BadSignature { pos: usize, neg: usize, zero: usize, expected_neg: usize },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("prime {name}: exceptional flag is {flag} but q = {square}")]
    ExceptionalFlagMismatch { name: String, flag: bool, square: String },

    #[error("round-mode geometry cannot carry exceptional prime {0}")]
    ExceptionalInRoundMode(String),

    #[error("duplicate name {0}")]
    DuplicateName(String),

    #[error("geometry document: {0}")]
    Document(String),

    #[error("malformed rational {0:?}")]
    MalformedRational(String),

    #[error("malformed surd {0:?}")]
    MalformedSurd(String),

    #[error("unknown name {0:?}")]
    UnknownName(String),

    #[error("empty divisor expression")]
    EmptyExpression,

    #[error("unexpected {found:?} at offset {offset} in divisor expression")]
    UnexpectedToken { found: String, offset: usize },

    #[error("unknown prime {0:?}")]
    UnknownPrime(String),

    #[error("all polynomial coefficients are zero")]
    ZeroPolynomial,

    #[error("surds with different radicands cannot be combined (sqrt({0}) and sqrt({1}))")]
    MixedRadicands(String, String),

    #[error("class is not pseudo-effective")]
    NotPseudoEffective,

    #[error("class is not movable")]
    NotMovable,

    #[error("class is not big")]
    NotBig,

    #[error("class has non-rational coordinates")]
    NonRational,

    #[error("prime {0} lies in the divisorial augmented base locus")]
    InAugmentedBaseLocus(String),

    #[error("prime {0} is exceptional")]
    ExceptionalPrime(String),

    #[error("prime {0} belongs to the chamber")]
    PrimeInChamber(String),

    #[error("scale factor {0} is negative")]
    NegativeScale(String),

    #[error("operation requires {0} mode")]
    WrongMode(&'static str),

    #[error("gram matrix of {{{0}}} is not negative definite")]
    NotNegativeDefinite(String),

    #[error("inconsistent prime catalog: {0}")]
    InconsistentCatalog(String),

    #[error("iteration cap of {0} exceeded")]
    IterationCap(usize),
}

impl Error {
    /// Stable kebab-case identifier for machine-readable reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::NonSquareGram => "non-square-gram",
            Error::NonSymmetricGram => "non-symmetric-gram",
            Error::BadSignature { .. } => "signature",
            Error::InvalidGeometry(_) => "invalid-geometry",
            Error::ExceptionalFlagMismatch { .. } => "exceptional-flag",
            Error::ExceptionalInRoundMode(_) => "exceptional-in-round-mode",
            Error::DuplicateName(_) => "duplicate-name",
            Error::Document(_) => "document",
            Error::MalformedRational(_) => "malformed-rational",
            Error::MalformedSurd(_) => "malformed-surd",
            Error::UnknownName(_) => "unknown-name",
            Error::EmptyExpression => "empty-expression",
            Error::UnexpectedToken { .. } => "unexpected-token",
            Error::UnknownPrime(_) => "unknown-prime",
            Error::ZeroPolynomial => "zero-polynomial",
            Error::MixedRadicands(..) => "mixed-radicands",
            Error::NotPseudoEffective => "not-pseudo-effective",
            Error::NotMovable => "not-movable",
            Error::NotBig => "not-big",
            Error::NonRational => "non-rational",
            Error::InAugmentedBaseLocus(_) => "in-augmented-base-locus",
            Error::ExceptionalPrime(_) => "exceptional-prime",
            Error::PrimeInChamber(_) => "prime-in-chamber",
            Error::NegativeScale(_) => "negative-scale",
            Error::WrongMode(_) => "wrong-mode",
            Error::NotNegativeDefinite(_) => "not-negative-definite",
            Error::InconsistentCatalog(_) => "inconsistent-catalog",
            Error::IterationCap(_) => "iteration-cap",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Document(_)
            | Error::MalformedRational(_)
            | Error::MalformedSurd(_)
            | Error::UnknownName(_)
            | Error::EmptyExpression
            | Error::UnexpectedToken { .. }
            | Error::UnknownPrime(_) => ErrorClass::Parse,
            Error::NotNegativeDefinite(_) | Error::InconsistentCatalog(_) | Error::IterationCap(_) => {
                ErrorClass::Inconsistent
            }
            _ => ErrorClass::Domain,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
