//! Exact evaluation of the number of partitions without consecutive parts,
//! together with the exact q-series, multiplier, Kloosterman and quadrature
//! machinery used to evaluate and cross-check it.

pub mod cli;
pub mod error;
pub mod formula;
pub mod integrals;
pub mod numerics;
pub mod kloosterman;
pub mod multiplier;
pub mod qseries;
pub mod verify;

pub use error::{Error, Result};
