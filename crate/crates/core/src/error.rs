use thiserror::Error;

/// Errors raised by the algebra, construction and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("extension degree {0} outside the supported range 1..=12")]
    DegreeOutOfRange(usize),
    #[error("field order {p}^{n} exceeds the supported magnitude")]
    FieldTooLarge { p: u64, n: usize },
    #[error("cannot embed F_{{p^{from}}} into F_{{p^{to}}}: {from} does not divide {to}")]
    NotASubfield { from: usize, to: usize },
    #[error("fields have different characteristic ({0} vs {1})")]
    CharacteristicMismatch(u64, u64),
    #[error("element is not in the image of the subfield")]
    NotInSubfield,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("counting field of order {order} exceeds the cap {cap}")]
    CountingCapExceeded { order: u64, cap: u64 },
    #[error("enumeration over F_{q} exceeds the cap {cap}")]
    EnumerationCapExceeded { q: u64, cap: u64 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("ramification points of the model are not all defined over F_(q^2)")]
    RamificationOutsideQuadratic,
    #[error("points must be pairwise distinct")]
    CoincidentPoints,
    #[error("Legendre coefficient must not be 0 or 1")]
    DegenerateLambda,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no alignment found: {0}")]
    NoAlignment(String),
    #[error("third curve mismatch: {0}")]
    ThirdCurveMismatch(String),
    #[error("certificate invariant violated: {0}")]
    InvalidCertificate(String),
    #[error("trace {t} is not admissible over F_{q}: {reason}")]
    Inadmissible { q: u64, t: i64, reason: String },
    #[error("traces are not Legendre consistent (searched {searched} candidates)")]
    NotConsistent { searched: u64 },
    #[error("measured trace {measured} cannot be reconciled with target {target} by a quadratic twist")]
    IrreconcilableTwist { target: i64, measured: i64 },
    #[error("point counts are not those of a genus-3 curve: {0}")]
    NotGenus3(String),
}

pub type Result<T> = std::result::Result<T, Error>;
