//! Exact topological recursion on rational spectral curves.

pub mod algebra;
pub mod certify;
pub mod curve;
pub mod error;
pub mod export;
pub mod oracles;
pub mod recursion;
pub mod wave;
pub mod wkb;
