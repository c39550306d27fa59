//! Exact computer algebra for varieties of nonassociative algebras equipped
//! with a derivation.
//!
//! The crate expands terms built from the two derived operations
//! `a ≻ b = d(a)b` and `a ≺ b = a d(b)` into the free algebra on decorated
//! generators, measures the span of those expansions against the weight −1
//! component of a variety, and rewrites weight −1 monomials back into
//! `≻`/`≺` form.
//!
//! Module map:
//! - [`term`]: generators, monomials, expressions, weight, derivation, parser.
//! - [`linalg`]: exact sparse echelon forms and preimage solving.
//! - [`variety`]: defining identities, consequence generation, quotient
//!   components and the bicommutative normal form.
//! - [`di`] and [`derived`]: `≻`/`≺` terms, the expansion map, dimensions and
//!   the weight criterion.
//! - [`express`]: solver-based and constructive rewriting into `≻`/`≺` form.
//! - [`report`]: the reproducible check suite behind the `opch report` command.

pub mod derived;
pub mod di;
pub mod engine;
pub mod error;
pub mod express;
pub mod linalg;
pub mod lincomb;
mod par;
pub mod properties;
pub mod report;
pub mod term;
pub mod variety;

pub use engine::{Config, Engine, Execution};
pub use error::{Error, LinalgError, Result, TermError};
pub use lincomb::LinComb;

/// Exact coefficient type used throughout.
pub type Rational = num_rational::BigRational;

/// `"p/q"`, the lossless text form used in cache files and reports.
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
