//! Grover-mixer QAOA: level-set spectra, closed-form Lie-algebraic
//! predictions, brute-force numerical oracles and a statevector simulator.
//!
//! Start with [`spectrum`] to turn an objective into levels and overlaps,
//! then [`analytic`] for predictions and [`oracle`] / [`sim`] to check them.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod problems;
pub mod sim;
pub mod spectrum;

pub use error::{Error, Result};
