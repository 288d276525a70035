//! Solvability of `x² − Dy² = n` through quartic and Hilbert symbols, Artin
//! conditions in ring class fields, and a continued-fraction Pell oracle.

pub mod error;
pub mod artin;
pub mod criteria;
pub mod intcore;
pub mod localanalysis;
pub mod pellsolver;
pub mod quadring;
pub mod symbols;
pub mod verdict;

pub use error::{Error, Result};
pub use symbols::SymbolValue;
pub use verdict::{Status, StatusKind, UnsolvableReason, Verdict};
