//! Exact arithmetic: rationals, sparse multivariate polynomials over ℚ,
//! reduced rational functions with symbolic partial derivatives, an
//! expression parser, and dense exact linear algebra.

// Tensor code indexes several arrays with the same loop variable.
#![allow(clippy::needless_range_loop)]

pub mod gcd;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use gcd::gcd;
pub use linalg::Field;
pub use parse::{parse_expr, ParseError};
pub use poly::{Monomial, Poly, Ring};
pub use ratfunc::RatFunc;
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}
