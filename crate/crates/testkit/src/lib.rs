//! Test oracles kept apart from the library under test.
//!
//! Nothing here depends on `schubert-core`: systems are handed over as raw
//! term lists, and counting oracles work on plain integer shapes.

pub mod extended;
pub mod naive;
pub mod tableaux;

pub use naive::{NaivePoly, NaiveSystem};
