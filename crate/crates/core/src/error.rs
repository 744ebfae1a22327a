use thiserror::Error;

/// Errors raised by the exact-arithmetic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid characteristic {0}: expected an odd prime")]
    InvalidCharacteristic(u64),
    #[error("finite field of order {ell}^{k} exceeds the supported size")]
    FieldTooLarge { ell: u64, k: u32 },
    #[error("modulus is not a monic irreducible polynomial of degree {k} over F_{ell}")]
    ReducibleModulus { ell: u64, k: u32 },
    #[error("no root of unity of order {order} in {field}")]
    OrderUnavailable { order: u64, field: String },
    #[error("prime {ell} divides the cyclotomic order {order}")]
    RamifiedPrime { ell: u64, order: u64 },
    #[error("requested residue degree {requested} is not a multiple of the minimal degree {minimal}")]
    ResidueFieldTooSmall { requested: u32, minimal: u32 },
    #[error("element is not integral at {ell}")]
    NotIntegralAtPrime { ell: u64 },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("eigenvalues found account for {found} of {dim} dimensions")]
    EigenvalueOutsideField { found: usize, dim: usize },
    #[error("subspace is not invariant under matrix {index}")]
    NotInvariant { index: usize },
    #[error("product relation violated; residual product {residual}")]
    ProductRelationViolated { residual: String },
    #[error("entry {0} is singular")]
    SingularEntry(usize),
    #[error("condition (a) violated: 2*phi({m}) must be < r - 4 = {r} - 4")]
    ConditionAViolated { m: u64, r: usize },
    #[error("m = {0} must be an integer > 2")]
    InvalidM(u64),
    #[error("arity mismatch: expected r = {expected}, got r = {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("character value must differ from 0 and 1")]
    InvalidCharacter,
    #[error("middle convolution needs at least 3 finite points, got {0}")]
    TooFewPoints(usize),
    #[error("entry {index} becomes singular after reduction")]
    BadReductionPrime { index: usize },
    #[error("parse error at {location}: {message}")]
    ParseError { location: String, message: String },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::ParseError {
            location: location.into(),
            message: message.into(),
        }
    }
}
