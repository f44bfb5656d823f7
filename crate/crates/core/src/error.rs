use thiserror::Error;

/// Errors surfaced by the library's domain operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported discriminant {0}: expected a squarefree negative d with class number 1")]
    UnsupportedDiscriminant(i64),
    #[error("zero element not allowed here")]
    ZeroElement,
    #[error("unit element not allowed here")]
    UnitElement,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} does not divide {1}")]
    NotDivisible(String, String),
    #[error("operation requires unique factorization; field d = {0} is flagged non-UFD")]
    NonUfdContext(i64),
    #[error("residue class is zero mod {0}")]
    ZeroResidueClass(u64),
    #[error("prime {0} is not inert in this field")]
    NotInert(u64),
    #[error("prime {0} is not supported by the residue machinery")]
    UnsupportedPrime(u64),
    #[error("conductor {0} is not a rational prime")]
    CompositeConductor(u64),
    #[error("conductor 1 designates the maximal order; the formula requires f > 1")]
    ConductorIsOne,
    #[error("element does not lie in the order (conductor {0})")]
    NotInOrder(u64),
    #[error("search budget {0} exceeded")]
    SearchBudgetExceeded(usize),
    #[error("product length {len} exceeds the exhaustive-scan bound {max}")]
    LengthBoundExceeded { len: usize, max: usize },
    #[error("prime factor count {count} exceeds the bound {max}")]
    FactorCountExceeded { count: usize, max: usize },
    #[error("group order {order} exceeds the search bound {max}")]
    GroupOrderExceeded { order: u128, max: u128 },
    #[error("invalid group spec: {0}")]
    InvalidGroupSpec(String),
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cannot parse element {0:?}: expected the a+b*w form")]
    ParseElement(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
