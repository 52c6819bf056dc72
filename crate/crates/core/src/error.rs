use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("energy {energy} exceeds the cap {cap}")]
    EnergyOverflow { energy: u64, cap: u64 },
    #[error("size mismatch: |λ| = {left}, |ρ| = {right}")]
    SizeMismatch { left: u64, right: u64 },
    #[error("pole of order {order} at the requested point; only simple poles have a residue here")]
    HigherOrderPole { order: usize },
    #[error("inadmissible residue tuple: {0}")]
    Inadmissible(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("series precision exhausted: need order {needed}, have {available}")]
    PrecisionExhausted { needed: i64, available: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
