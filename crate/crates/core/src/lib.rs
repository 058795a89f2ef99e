//! Metzner–Kapturowski-like decoding of high-order interleaved
//! sum-rank-metric codes, with the exact combinatorics and Monte Carlo
//! machinery that characterise when it succeeds.

pub mod cli;
pub mod code;
pub mod combinatorics;
pub mod decoder;
pub mod error;
pub mod field;
pub mod matrix;
pub mod montecarlo;
pub mod sumrank;

pub use error::{Error, Result};
pub use field::{ExtField, FieldElement};
pub use matrix::Mat;
