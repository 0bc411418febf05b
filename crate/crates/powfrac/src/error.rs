//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("polynomial has a proper rational factor: root {0}")]
    Reducible(String),

    #[error("no real root greater than 1")]
    NoRootAboveOne,

    #[error("more than one real root greater than 1")]
    AmbiguousRoot,

    #[error("precision exhausted at {bits} bits (cap {cap}): {context}")]
    PrecisionExhausted {
        bits: u32,
        cap: u32,
        context: String,
    },

    #[error("not a Salem number")]
    NotSalem,

    #[error("field elements have different base fields")]
    BaseMismatch,

    #[error("base is not an algebraic integer (leading coefficient != 1)")]
    NotAlgebraicInteger,

    #[error("orbit sample inconsistency at n={n}: integer and fractional sides of s_n disagree")]
    InconsistentSample { n: u64 },

    #[error("scaled cluster set does not embed into the projected centers (center {0})")]
    ToleranceViolation(String),

    #[error("no repeated center window within the horizon (state bound {bound})")]
    NoCollision { bound: u64 },

    #[error("sample at n={n} lies farther than epsilon from every cluster center")]
    EtaAssignment { n: u64 },

    #[error("no irrational center pair: tau undefined")]
    NoIrrationalPairs,

    #[error("bad recurrence input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable process exit code for the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::BadInput(_) | Error::Reducible(_) => 2,
            Error::PrecisionExhausted { .. } => 3,
            Error::InconsistentSample { .. } | Error::ToleranceViolation(_) => 4,
            _ => 2,
        }
    }
}
