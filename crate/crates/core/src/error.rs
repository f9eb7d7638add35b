//! Error type shared by every module of the engine.

use thiserror::Error;

use crate::multipoly::MLaurent;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at q = {0}")]
    Pole(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not divisible; remainder {remainder}")]
    NotDivisible { remainder: Box<MLaurent> },
    #[error("variable {0} has no assignment")]
    UnassignedVariable(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("invalid Cartan matrix: {}", .0.join("; "))]
    InvalidCartan(Vec<String>),
    #[error("rewrite budget of {budget} steps exhausted with {pending} words pending")]
    BudgetExceeded { budget: usize, pending: usize },
    #[error("edge complement contains an oriented cycle")]
    Cyclic,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
