use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("vector length {0} outside supported range 1..={max}", max = crate::z4::MAX_LEN)]
    UnsupportedLength(usize),

    #[error("residue {0} is not in Z4")]
    InvalidResidue(u8),

    #[error("invalid symbol {symbol:?} at position {position}")]
    InvalidSymbol { symbol: char, position: usize },

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("property is not multiplicative: P[x] holds but P[3x] fails for x = {0}")]
    NonMultiplicative(crate::z4::Z4Vector),

    #[error("property parse error: {0}")]
    PropertyParse(String),

    #[error("cost model error: {0}")]
    CostModel(String),

    #[error("code file error at line {line}: {message}")]
    CodeFile { line: usize, message: String },

    #[error("instance over budget: universe of {universe} vertices exceeds limit {limit}")]
    OverBudget { universe: usize, limit: usize },

    #[error("invalid bound key: {0}")]
    InvalidKey(String),

    #[error("puncture failed: {0}")]
    Puncture(String),

    #[error("table data error: {0}")]
    TableData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Width-limited rendering for witness lists in reports.
pub(crate) struct Elided<'a, T>(pub &'a [T], pub usize);

impl<T: fmt::Display> fmt::Display for Elided<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.0.iter().take(self.1).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{item}")?;
        }
        if self.0.len() > self.1 {
            write!(f, ", ... ({} more)", self.0.len() - self.1)?;
        }
        Ok(())
    }
}
