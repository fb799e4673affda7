use thiserror::Error;

use crate::delta_complex::Slot;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid root specification: order {order}, power {power}")]
    InvalidRoot { order: u64, power: i64 },

    #[error("malformed gluing at slot {slot}: {reason}")]
    MalformedGluing { slot: Slot, reason: &'static str },

    #[error("ridge {ridge:?} is shared by {count} facets")]
    OverfullRidge { ridge: Vec<usize>, count: usize },

    #[error("malformed facet list: {0}")]
    MalformedFacets(String),

    #[error("slot {0} is already glued")]
    SlotAlreadyGlued(Slot),

    #[error("invalid orientation signs: {0}")]
    InvalidSigns(String),

    #[error("complex has no orientation signs assigned")]
    NotOriented,

    #[error("complex is not orientable (conflict along top simplices {witness:?})")]
    NonOrientable { witness: Vec<usize> },

    #[error("operation requires a closed complex ({0} boundary slots)")]
    NotClosed(usize),

    #[error("expected a {expected}-dimensional complex, got dimension {actual}")]
    WrongDimension { expected: usize, actual: usize },

    #[error("enumeration of about {estimate:.3e} terms exceeds the budget of {budget}")]
    BudgetExceeded { estimate: f64, budget: u64 },

    #[error("invalid Pachner split ({0}, {1})")]
    InvalidSplit(usize, usize),

    #[error("unknown builtin complex `{0}`")]
    UnknownBuiltin(String),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
