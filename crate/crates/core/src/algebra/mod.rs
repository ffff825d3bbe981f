//! Exact arithmetic: quadratic fields, polynomials, series, rational and log-augmented functions.

pub mod field;
pub mod hbar;
pub mod linsolve;
pub mod logfn;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod series;

pub use field::{binomial, factorial, FieldElement};
pub use hbar::HbarLaurent;
pub use logfn::{LocalExpansion, LogAugmentedFunction};
pub use poly::Polynomial;
pub use ratfun::{ExpansionPoint, PartialFractions, RationalFunction};
pub use series::{Center, LaurentSeries};
