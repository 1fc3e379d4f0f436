use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not an exact polynomial multiple")]
    NonDivisible,

    #[error("sequence index {index} beyond truncation {max}")]
    Truncated { index: u32, max: u32 },

    #[error("sequence is not flat: curvature nonzero at (m,n)=({0},{1})")]
    NotFlat(u32, u32),

    #[error("no gauge sequence: L_{m} p is not a multiple of p")]
    GaugeNonDivisible { m: u32 },

    #[error("variable mismatch: {0}")]
    VariableMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Invalid(String),
}
