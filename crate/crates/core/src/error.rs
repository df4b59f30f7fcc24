use thiserror::Error;

use crate::field::FieldSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures raised by the library.
///
/// Everything except [`Error::Unsupported`] is a mathematical domain error:
/// the input does not satisfy the preconditions of the requested operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("{0} is not a valid place (expected an odd or even prime, or infinity)")]
    InvalidPlace(String),
    #[error("mixed coefficient fields: {0} and {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("operands live over different algebras")]
    AlgebraMismatch,
    #[error("{0}: input must be nonzero")]
    ZeroInput(&'static str),
    #[error("degree {0} exceeds the supported maximum of {max}", max = crate::poly::MAX_DEGREE)]
    DegreeTooLarge(usize),
    #[error("{0} is not invertible in {1}")]
    NotInvertible(String, FieldSpec),
    #[error("factor {0} is not monic")]
    NonMonicFactor(String),
    #[error("factor {0} has degree zero")]
    ConstantFactor(String),
    #[error("factor {0} is not separable")]
    NonSeparable(String),
    #[error("trace form is degenerate")]
    DegenerateTraceForm,
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is degenerate: its determinant is not a unit")]
    Degenerate,
    #[error("rank {0} exceeds the cofactor guard of 8 for non-field algebras")]
    RankTooLarge(usize),
    #[error("scalar {0} is not a unit")]
    NotUnit(String),
    #[error("scalar {scalar} is incompatible with the discriminant {discriminant} modulo squares")]
    IncompatibleScalar { discriminant: String, scalar: String },
    #[error("hyperbolic forms need an even rank >= 2, got {0}")]
    OddHyperbolicRank(usize),
    #[error("no unit pivot found while diagonalizing over a non-field algebra")]
    NoUnitPivot,
    #[error("length mismatch: {0} classes but {1} points")]
    LengthMismatch(usize, usize),
    #[error("points must be pairwise distinct; {0} repeats")]
    DuplicatePoint(String),
    #[error("not a pointed rational function: {0}")]
    NotPointed(String),
    #[error("numerator and denominator share the factor {0}")]
    CommonFactor(String),
    #[error("{0} is not a root of the numerator")]
    NotARoot(String),
    #[error("non-rational zeroes present; theorem hypothesis unmet (multiplicities sum to {found}, degree is {degree})")]
    RootsIncomplete { found: usize, degree: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_unsupported(&self) -> bool {
        matches!(self, Error::Unsupported(_))
    }
}
