//! Schubert problems on Grassmannians as square bilinear polynomial systems:
//! formulation, homotopy solving, α-theory certification and verification.

pub mod arith;
pub mod cells;
pub mod certify;
pub mod combinat;
pub mod error;
pub mod flags;
pub mod formulate;
pub mod io;
pub mod linalg;
pub mod polysys;
pub mod rng;
pub mod solve;
pub mod verify;

pub use error::{Error, Result};
