use thiserror::Error;

/// Everything that can go wrong across the crate.
///
/// Arithmetic and geometry errors are conditions a caller can hit with
/// well-formed inputs (division by zero, a non-prime-power order). The
/// `SizeGuard` variant is different: it signals that an operation refused to
/// run because its output or work estimate exceeds a fixed budget, so the
/// caller can distinguish "false" from "too big to decide".
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("division by zero in GF({order})")]
    DivisionByZero { order: u64 },

    #[error("operands belong to different fields: GF({left}) vs GF({right})")]
    FieldMismatch { left: u64, right: u64 },

    #[error("index {index} out of range: limit is {limit}")]
    IndexOutOfRange { index: u64, limit: u64 },

    #[error("the zero vector has no direction")]
    ZeroVector,

    #[error("{label} requires {required} but the budget is {budget}")]
    SizeGuard {
        label: &'static str,
        required: u64,
        budget: u64,
    },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("bad deal: {0}")]
    BadDeal(String),

    #[error("hand has {got} cards, expected {expected}")]
    BadHandSize { expected: u64, got: u64 },

    #[error("the excluding-hand construction needs at least one intercepted card")]
    EmptyCath,

    #[error("resolution is ambiguous: {candidates} published hands avoid the known cards")]
    Ambiguous { candidates: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
