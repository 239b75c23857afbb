use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("conormal {facet} has length {found}, expected {expected}")]
    DimensionMismatch { facet: usize, expected: usize, found: usize },
    #[error("support vector has length {found}, expected {expected}")]
    SupportLength { expected: usize, found: usize },
    #[error("need at least n+1 = {needed} facets, found {found}")]
    TooFewFacets { needed: usize, found: usize },
    #[error("at most 64 facets are supported, found {0}")]
    TooManyFacets(usize),
    #[error("conormal {0} is zero")]
    ZeroConormal(usize),
    #[error("lattice mode requires primitive integer conormals; conormal {0} is not")]
    NotPrimitive(usize),
    #[error("polytope is unbounded: the conormals do not positively span")]
    Unbounded,
    #[error("polytope is empty or has empty interior")]
    EmptyPolytope,
    #[error("polytope is not simple: a vertex lies on {count} facets")]
    NotSimple { count: usize },
    #[error("inequality {0} defines no facet")]
    EmptyFacet(usize),
    #[error("facet {0} has no lattice-compatible section")]
    NoLatticeSection(usize),
    #[error("facet index {index} out of range for {nfacets} facets")]
    IndexOutOfRange { index: usize, nfacets: usize },
    #[error("indices must be distinct")]
    RepeatedIndex,
    #[error("support vector lies outside the chamber")]
    OutsideChamber,
    #[error("H is not mass linear")]
    NotMassLinear,
    #[error("H must be nonzero")]
    ZeroFunction,
    #[error("facet {0} is asymmetric for H")]
    AsymmetricFaceRequested(usize),
    #[error("the requested face is empty")]
    EmptyFace,
    #[error("facets {0} and {1} are not equivalent")]
    NotEquivalent(usize, usize),
    #[error("the class has a single facet")]
    SingletonClass,
    #[error("operation unsupported in dimension {0}")]
    DimensionUnsupported(usize),
    #[error("polytope is not smooth")]
    NotSmooth,
    #[error("invalid twist: {0}")]
    InvalidTwist(String),
    #[error("blow-up parameter too large: {0}")]
    EpsilonTooLarge(String),
    #[error("unknown property {0:?}")]
    UnknownTheorem(String),
    #[error("vector is not integral")]
    NonIntegral,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("counterexample: {0}")]
    Counterexample(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Validation failures of the input data itself, as opposed to requests
    /// that do not apply to a valid input.
    /// Process exit code: 1 counterexample, 2 parse error, 3 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Counterexample(_) => 1,
            Error::Parse(_) => 2,
            _ => 3,
        }
    }

    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::ZeroDimension
                | Error::DimensionMismatch { .. }
                | Error::SupportLength { .. }
                | Error::TooFewFacets { .. }
                | Error::TooManyFacets(_)
                | Error::ZeroConormal(_)
                | Error::NotPrimitive(_)
                | Error::Unbounded
                | Error::EmptyPolytope
                | Error::NotSimple { .. }
                | Error::EmptyFacet(_)
                | Error::OutsideChamber
                | Error::EpsilonTooLarge(_)
                | Error::InvalidTwist(_)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Error::Counterexample("x".into()).exit_code(), 1);
        assert_eq!(Error::Parse("x".into()).exit_code(), 2);
        assert_eq!(Error::Unbounded.exit_code(), 3);
        assert_eq!(Error::UnknownTheorem("x".into()).exit_code(), 3);
        assert!(Error::Unbounded.is_validation());
        assert!(!Error::NotSmooth.is_validation());
    }
}
