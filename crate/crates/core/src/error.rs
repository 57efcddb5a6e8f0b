//! Error types shared across the crate.

use std::fmt;

/// Errors produced by parsing, evaluation, conversion, and elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Syntax error in a formula, points file, or graph file.
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    /// An assignment does not cover a variable needed for evaluation.
    MissingVariable(String),
    /// Expanding a term into standard form exceeded the monomial budget.
    ExpansionBudget { limit: usize },
    /// The branching tree of the elimination exceeded the node budget.
    NodeBudget { limit: usize },
    /// An operation received input outside its contract.
    Input(String),
    /// Internal invariant violation (a bug, not a user error).
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { line, col, msg } => {
                write!(f, "parse error at {}:{}: {}", line, col, msg)
            }
            Error::MissingVariable(v) => write!(f, "assignment is missing variable {}", v),
            Error::ExpansionBudget { limit } => {
                write!(f, "expansion budget exceeded ({} monomials)", limit)
            }
            Error::NodeBudget { limit } => write!(f, "node budget exceeded ({} nodes)", limit),
            Error::Input(msg) => write!(f, "invalid input: {}", msg),
            Error::Internal(msg) => write!(f, "internal error: {}", msg),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
