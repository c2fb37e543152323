use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid sequence text: {0}")]
    Parse(String),

    #[error("period mismatch: 2^{left} vs 2^{right}")]
    PeriodMismatch { left: u32, right: u32 },

    #[error("{what} = {value} out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        range: String,
    },

    #[error("brute force needs {needed} linear complexity evaluations, budget is {budget}")]
    Capacity { needed: u128, budget: u64 },

    #[error("invalid cube: {0}")]
    InvalidCube(String),

    #[error("operation undefined on the empty mask")]
    EmptyMask,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("non-exact division in counting formula: {0}")]
    NonExactDivision(String),

    #[error("n = {n} is above the exhaustive cap {cap}; use sampled mode")]
    AboveCap { n: u32, cap: u32 },
}

impl Error {
    pub(crate) fn out_of_range(what: &'static str, value: impl Into<i64>, range: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            value: value.into(),
            range: range.into(),
        }
    }
}
