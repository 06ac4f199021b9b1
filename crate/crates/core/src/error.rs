use crate::polymorphism::PolymorphismTuple;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("degenerate predicate: {0}")]
    Degenerate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("capability limit exceeded: {0}")]
    Capability(String),

    /// The search ran out of table-entry assignments before finishing. The
    /// payload holds whatever was found up to that point.
    #[error(
        "budget of {} assignments exhausted; {} result(s) found before stopping",
        .0.budget,
        .0.found_count()
    )]
    BudgetExhausted(Box<PartialEnumeration>),
}

/// Results of an enumeration that was cut short.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialEnumeration {
    pub budget: u64,
    /// Tuples collected before exhaustion (empty when they were streamed to a visitor).
    pub partial: Vec<PolymorphismTuple>,
    /// Tuples delivered to a visitor before exhaustion.
    pub streamed: usize,
}

impl PartialEnumeration {
    pub fn found_count(&self) -> usize {
        self.partial.len().max(self.streamed)
    }
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn budget(budget: u64, partial: Vec<PolymorphismTuple>, streamed: usize) -> Self {
        Error::BudgetExhausted(Box::new(PartialEnumeration { budget, partial, streamed }))
    }

    /// True for errors caused by resource limits rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::BudgetExhausted(_) | Error::Capability(_))
    }
}
