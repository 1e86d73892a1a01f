use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid exponent: {0} (need 0 < p <= inf)")]
    InvalidExponent(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("width regime not covered: {0}")]
    RegimeNotCovered(String),

    #[error("enumeration of {requested} lattice points exceeds the cap of {cap}")]
    EnumerationCap { requested: u64, cap: u64 },

    #[error("allocation infeasible: {0}")]
    Infeasible(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("operation needs the diagonal case p1 = p2 = q1 = q2: {0}")]
    NotDiagonal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
