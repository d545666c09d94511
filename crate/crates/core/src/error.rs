use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Which search limit was hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetKind {
    Nodes,
    Time,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("search budget exceeded ({0:?})")]
    BudgetExceeded(BudgetKind),
    #[error("subgroup containment violated: {0}")]
    NotSubgroup(String),
    #[error("set is not invariant under the group: {0}")]
    NotInvariant(String),
    #[error("group is not transitive")]
    Intransitive,
    #[error("group is primitive")]
    Primitive,
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("order exceeds the enumeration cap {0}")]
    OrderCap(u64),
    #[error("index exceeds the cap {0}")]
    IndexCap(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("overgroup chain invariant violated: {0}")]
    ChainViolation(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_))
    }
}
