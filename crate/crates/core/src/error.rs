use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("state is not normalized (squared norm {norm_sqr})")]
    Normalization { norm_sqr: f64 },

    #[error("vector {index} is (nearly) linearly dependent on the previous ones")]
    DegenerateSpan { index: usize },

    #[error("tensor product of an empty list")]
    EmptyTensor,

    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("matrix is not a projector ({0})")]
    NotProjector(&'static str),

    #[error("matrix is not unitary")]
    NotUnitary,

    #[error("temporal support mismatch: {0}")]
    Support(String),

    #[error("histories {first} and {second} are not disjoint")]
    Disjointness { first: usize, second: usize },

    #[error("no trajectory exists: the history has probability zero")]
    Infeasible,

    #[error("lambda {lambda} outside the supported range 1..={max}")]
    LambdaRange { lambda: u32, max: u32 },
}

pub type Result<T> = core::result::Result<T, Error>;
