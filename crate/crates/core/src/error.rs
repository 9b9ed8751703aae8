use thiserror::Error;

use crate::funcfield::Place;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the arithmetic and decision layers.
///
/// "No solution" outcomes (non-squares, elements outside the Artin-Schreier
/// image) are ordinary values and never appear here.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported field F_2^{0}: k must lie in 1..=8")]
    UnsupportedField(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different extension fields")]
    ModulusMismatch,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("operation undefined on the zero element")]
    ZeroElement,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("multiplicative slot of a symbol must be nonzero")]
    ZeroMultiplicativeSlot,
    #[error("scaling factor must be nonzero")]
    ZeroScalar,
    #[error("quadratic form is degenerate (radical dimension {radical_dim}, quadratic radical nonzero: {quadratic_radical})")]
    DegenerateForm {
        radical_dim: usize,
        quadratic_radical: bool,
    },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("both summands carry an odd part; normalize a Gram input instead")]
    TwoOddParts,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("field mismatch between operands")]
    FieldMismatch,
    #[error("local invariants violate the classification table at {place}: {detail}")]
    InconsistentLocalData { place: Place, detail: String },
    #[error("reciprocity violated: {0}")]
    ReciprocityViolation(String),
    #[error("similarity factor {0} failed verification")]
    FactorVerificationFailed(String),
    #[error("no similarity factor found within degree bound {0}")]
    NotFoundWithinBound(usize),
}

impl Error {
    /// Stable machine-readable code, used in JSON reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnsupportedField(_) => "UnsupportedField",
            Error::DivisionByZero => "DivisionByZero",
            Error::ModulusMismatch => "ModulusMismatch",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::ZeroElement => "ZeroElement",
            Error::NotIrreducible => "NotIrreducible",
            Error::ZeroMultiplicativeSlot => "ZeroMultiplicativeSlot",
            Error::ZeroScalar => "ZeroScalar",
            Error::DegenerateForm { .. } => "DegenerateForm",
            Error::RankMismatch(..) => "RankMismatch",
            Error::TwoOddParts => "TwoOddParts",
            Error::SingularMatrix => "SingularMatrix",
            Error::Malformed(_) => "Malformed",
            Error::Parse { .. } => "ParseError",
            Error::FieldMismatch => "FieldMismatch",
            Error::InconsistentLocalData { .. } => "InconsistentLocalData",
            Error::ReciprocityViolation(_) => "ReciprocityViolation",
            Error::FactorVerificationFailed(_) => "FactorVerificationFailed",
            Error::NotFoundWithinBound(_) => "NotFoundWithinBound",
        }
    }
}
