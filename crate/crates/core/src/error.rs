use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("expression mixes weights {first} and {other}")]
    MixedWeight { first: i64, other: i64 },
    #[error("expression is zero")]
    ZeroExpr,
    #[error("no multilinear monomials of arity {arity} have weight {weight}")]
    InvalidWeight { arity: usize, weight: i64 },
    #[error("derivation order would exceed the cap of {cap}")]
    DerivationCap { cap: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("vector has length {found}, ambient has {expected} columns")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("target is not in the span of the columns")]
    NotInImage,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("unknown variety {0:?}")]
    UnknownVariety(String),
    #[error("expected {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("variable x{var} occurs in more than one argument")]
    VariableClash { var: u32 },
    #[error("{variety} is a {found}-operation variety, expected {expected}")]
    OpCount {
        variety: String,
        expected: usize,
        found: usize,
    },
    #[error("{derived} is not the derived variety of {base}")]
    PairMismatch { derived: String, base: String },
    #[error("expression is not multilinear on x1..x{arity}")]
    NotMultilinear { arity: usize },
    #[error("element of weight {weight} cannot be expressed by the derived operations")]
    WeightNotMinusOne { weight: i64 },
    #[error("arity {arity} exceeds the configured bound {max}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("monomial has no derived generator")]
    NoDerivation,
    #[error("monomial has a single derived generator; both factors cannot carry one")]
    SingleDerivation,
    #[error("no constructive method for {variety}; use the solver")]
    NoConstructiveMethod { variety: String },
    #[error("leaf x{var} does not occur in the word")]
    MissingLeaf { var: u32 },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed cache file {path}: {message}")]
    Cache { path: PathBuf, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
