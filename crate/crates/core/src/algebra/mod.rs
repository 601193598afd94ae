//! Exact rational arithmetic on polynomials and rational functions.

pub mod factor;
pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use factor::{double_root_factor, DoubleRootFactor, FactorError, Mismatch};
pub use num_rational::BigRational;
pub use poly::{DivisionError, Polynomial};
pub use ratfunc::RationalFunction;
pub use rational::{format_q, parse_q, q, qi};
