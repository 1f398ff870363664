//! Fixpoint terms, guardedness, and evaluation by approximants over any
//! effective region algebra.

mod eval;
mod parse;
mod term;
mod word;

use thiserror::Error;

pub use eval::{
    check_fixpoints, decide_query, evaluate, evaluate_partial, Env, EvalStats, Limits, Query, RegionAlgebra,
};
pub use parse::{is_keyword, parse_term};
pub use term::{Fix, Offense, Term};
pub use word::WordAlgebra;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown operator '{name}' at offset {pos}")]
    UnknownOperator { name: String, pos: usize },
    #[error("operator '{name}' takes {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("bound variable {0} occurs under an odd number of complements")]
    Parity(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unguarded binder {0}")]
    Unguarded(String),
    #[error("binder {binder} did not stabilize within {cap} iterations")]
    IterationCap { binder: String, cap: usize },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("{0}")]
    Algebra(String),
    #[error("approximants of {0} are not monotone")]
    NotMonotone(String),
}

#[cfg(test)]
mod tests;
